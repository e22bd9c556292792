"""Fixed-column MPS text export/import for cross-checking models.

Writes the classic eight/twelve-column MPS layout (fields start at columns
2, 5, 15, 25, 40, 50; values carry 17 significant digits so a write/read
round trip is exact). The reader accepts the same subset it writes: N/L/G/E
rows, COLUMNS, RHS, and UP/LO/FX/MI/FR/PL bounds. Metadata does not survive
the format; re-imported models solve to the same optimum.
"""

from __future__ import annotations

from pathlib import Path

from geolith.errors import GeolithError
from geolith.esom.model import SENSE_EQ, SENSE_GE, SENSE_LE, LpModel

_SENSE_TO_MPS = {SENSE_LE: "L", SENSE_GE: "G", SENSE_EQ: "E"}
_MPS_TO_SENSE = {v: k for k, v in _SENSE_TO_MPS.items()}

_OBJ = "COST"


def _field(tag: str, a: str = "", b: str = "", c: str = "", d: str = "") -> str:
    return f" {tag:<2} {a:<10}{b:<15}{c:<15}{d}".rstrip()


def write_lp_text(model: LpModel, path: str | Path) -> None:
    """Serialize a model to fixed-column MPS."""
    path = Path(path)
    lines = [f"NAME          {model.name}"]
    lines.append("ROWS")
    lines.append(f" N  {_OBJ}")
    for name, sense in zip(model.row_names, model.row_sense):
        lines.append(f" {_SENSE_TO_MPS[sense]}  {name}")

    by_col: dict[int, list[tuple[int, float]]] = {}
    for row, col, val in zip(model.entries_row, model.entries_col, model.entries_val):
        by_col.setdefault(col, []).append((row, val))

    lines.append("COLUMNS")
    for j, cname in enumerate(model.var_names):
        if model.var_obj[j] != 0.0:
            lines.append(f"    {cname:<10}{_OBJ:<10}{model.var_obj[j]:.17g}")
        merged: dict[int, float] = {}
        for row, val in by_col.get(j, []):
            merged[row] = merged.get(row, 0.0) + val
        for row in sorted(merged):
            if merged[row] != 0.0:
                lines.append(
                    f"    {cname:<10}{model.row_names[row]:<10}{merged[row]:.17g}"
                )

    lines.append("RHS")
    for name, rhs in zip(model.row_names, model.row_rhs):
        if rhs != 0.0:
            lines.append(f"    RHS       {name:<10}{rhs:.17g}")

    lines.append("BOUNDS")
    for j, cname in enumerate(model.var_names):
        lb, ub = model.var_lb[j], model.var_ub[j]
        if lb == ub:
            lines.append(f" FX BND       {cname:<10}{lb:.17g}")
            continue
        import math

        if math.isinf(lb) and math.isinf(ub):
            lines.append(f" FR BND       {cname}")
            continue
        if math.isinf(lb):
            lines.append(f" MI BND       {cname}")
        elif lb != 0.0:
            lines.append(f" LO BND       {cname:<10}{lb:.17g}")
        if not math.isinf(ub):
            lines.append(f" UP BND       {cname:<10}{ub:.17g}")

    if model.objective_constant != 0.0:
        lines.append(f"* OBJSENSE MIN, constant {model.objective_constant:.17g}")
    lines.append("ENDATA")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_lp_text(path: str | Path) -> LpModel:
    """Parse a model previously written by :func:`write_lp_text`."""
    import math

    path = Path(path)
    if not path.exists():
        raise GeolithError(f"LP text file not found: {path}")
    model = LpModel(path.stem)
    section = None
    row_index: dict[str, int] = {}
    col_index: dict[str, int] = {}
    col_entries: dict[str, list[tuple[str, float]]] = {}
    col_obj: dict[str, float] = {}
    rhs_map: dict[str, float] = {}
    bounds: list[tuple[str, str, float | None]] = []

    for raw in path.read_text(encoding="utf-8").splitlines():
        if not raw.strip() or raw.startswith("*"):
            continue
        if not raw.startswith(" "):
            head = raw.split()
            keyword = head[0]
            if keyword == "NAME":
                model.name = head[1] if len(head) > 1 else model.name
            elif keyword in ("ROWS", "COLUMNS", "RHS", "BOUNDS"):
                section = keyword
            elif keyword == "ENDATA":
                break
            else:
                raise GeolithError(f"unknown MPS section '{keyword}'")
            continue
        parts = raw.split()
        if section == "ROWS":
            tag, name = parts[0], parts[1]
            if tag == "N":
                continue
            if tag not in _MPS_TO_SENSE:
                raise GeolithError(f"unknown row type '{tag}'")
            row_index[name] = len(row_index)
            model.add_row(_MPS_TO_SENSE[tag], 0.0, name)
        elif section == "COLUMNS":
            cname, rname, value = parts[0], parts[1], float(parts[2])
            if cname not in col_index:
                col_index[cname] = len(col_index)
                col_entries[cname] = []
            if rname == _OBJ:
                col_obj[cname] = value
            else:
                col_entries[cname].append((rname, value))
            if len(parts) >= 5:
                rname2, value2 = parts[3], float(parts[4])
                if rname2 == _OBJ:
                    col_obj[cname] = value2
                else:
                    col_entries[cname].append((rname2, value2))
        elif section == "RHS":
            rhs_map[parts[1]] = float(parts[2])
        elif section == "BOUNDS":
            tag, cname = parts[0], parts[2]
            value = float(parts[3]) if len(parts) > 3 else None
            bounds.append((tag, cname, value))
        else:
            raise GeolithError("data line outside any section")

    for rname, value in rhs_map.items():
        if rname not in row_index:
            raise GeolithError(f"RHS references unknown row '{rname}'")
        model.row_rhs[row_index[rname]] = value

    lower = {name: 0.0 for name in col_index}
    upper = {name: math.inf for name in col_index}
    for tag, cname, value in bounds:
        if cname not in col_index:
            raise GeolithError(f"bound references unknown column '{cname}'")
        if tag == "UP":
            upper[cname] = value
        elif tag == "LO":
            lower[cname] = value
        elif tag == "FX":
            lower[cname] = upper[cname] = value
        elif tag == "MI":
            lower[cname] = -math.inf
        elif tag == "FR":
            lower[cname], upper[cname] = -math.inf, math.inf
        elif tag == "PL":
            upper[cname] = math.inf
        else:
            raise GeolithError(f"unknown bound type '{tag}'")

    for cname in col_index:
        j = model.add_variable(cname, lower[cname], upper[cname], col_obj.get(cname, 0.0))
        for rname, value in col_entries[cname]:
            if rname not in row_index:
                raise GeolithError(f"column references unknown row '{rname}'")
            model.add_coeff(row_index[rname], j, value)
    return model
