from .cech import CechOracle, Unstable, cech_oracle
from .depth import (GammaFgVerdict, GdepthVerdict, Inconclusive, gamma_fg, gdepth, region_vertex,
                    transform_nonzero, vad_estimate, veronese_depth, veronese_depth_exact, veronese_gdepth)
from .local import Cohomology, cohomology, ext_piece, lc_piece
from .resolution import Resolution, depth_ab, free_resolution

__all__ = [
    "CechOracle", "Unstable", "cech_oracle",
    "GammaFgVerdict", "GdepthVerdict", "Inconclusive", "gamma_fg", "gdepth", "region_vertex",
    "transform_nonzero", "vad_estimate", "veronese_depth", "veronese_depth_exact", "veronese_gdepth",
    "Cohomology", "cohomology", "ext_piece", "lc_piece",
    "Resolution", "depth_ab", "free_resolution",
]
