"""Result envelopes and their table / json renderings."""
import hashlib
import json
import os
from fractions import Fraction

SCHEMA_VERSION = 1


def digest(path):
    """sha256 of a file, or of every file under a directory (relative paths and bytes, sorted)."""
    h = hashlib.sha256()
    if os.path.isdir(path):
        files = sorted(os.path.relpath(os.path.join(d, f), path)
                       for d, _, names in os.walk(path) for f in names)
        for rel in files:
            h.update(rel.replace(os.sep, "/").encode("utf-8") + b"\0")
            _feed(h, os.path.join(path, rel))
    else:
        _feed(h, path)
    return h.hexdigest()


def _feed(h, path):
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)


def _plain(x):
    """JSON-safe copy: tuples become lists, Fractions become strings."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def envelope(command, input_path, input_digest, parameters, results, qualifiers=(), wall_clock=None):
    env = {
        "schemaVersion": SCHEMA_VERSION,
        "command": command,
        "input": {"path": input_path, "sha256": input_digest},
        "parameters": parameters,
        "qualifiers": list(qualifiers),
        "results": results,
    }
    if wall_clock is not None:
        env["wallClockSeconds"] = round(wall_clock, 3)
    return env


def to_json(env):
    return (json.dumps(_plain(env), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _cell(v):
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(str(x) for x in v) + ")"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_cell(x)}" for k, x in v.items())
    return str(v)


def render_grid(grid):
    """Local cohomology grid: one row per index i, one column per degree."""
    degrees = grid["degrees"]
    head = ["i \\ n"] + [_cell(d) for d in degrees]
    rows = [head] + [[f"H^{row['i']}"] + [str(x) for x in row["dims"]] for row in grid["rows"]]
    widths = [max(len(r[c]) for r in rows) for c in range(len(head))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in rows)


def render_table(env):
    lines = [f"command: {env['command']}"]
    inp = env["input"]
    if inp.get("path"):
        lines.append(f"input: {inp['path']} (sha256 {inp['sha256'][:12]})")
    if env["parameters"]:
        lines.append("parameters: " + _cell(env["parameters"]))
    for q in env["qualifiers"]:
        lines.append(f"note: {q}")
    for res in env["results"]:
        lines.append("")
        title = res.get("case") or res.get("module") or res.get("ideal")
        if title:
            lines.append(f"== {title}")
        for key, value in res.items():
            if key in ("case", "module", "ideal"):
                continue
            if key == "grid":
                lines.append(render_grid(value))
            elif isinstance(value, list) and value and isinstance(value[0], dict):
                lines.append(f"{key}:")
                for item in value:
                    lines.append("  " + _cell(item))
            else:
                lines.append(f"{key}: {_cell(value)}")
    if "wallClockSeconds" in env:
        lines.append("")
        lines.append(f"wall clock: {env['wallClockSeconds']} s")
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit(env, fmt):
    if fmt == "json":
        return to_json(env)
    if fmt == "table":
        return render_table(env)
    raise ValueError(f"unknown format {fmt!r}")
