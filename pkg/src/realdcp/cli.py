"""Command-line interface: ``realdcp <command> --type <type> [options]``.

Exit status: 0 on success, 2 for unparsable input, 3 when the element cap
is exceeded, 4 when an internal consistency check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import charcalc, flats, h1sigma
from .rootsys import CoxeterType, InvalidTypeError

COMMANDS = ("poincare", "betti", "euler", "character", "multiplicities", "h1", "poset-export", "verify")
FORMATS = ("text", "json", "csv", "latex")
CACHE_ENV = "REALDCP_CACHE_DIR"

EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_CONSISTENCY = 4


@dataclass
class RunConfig:
    command: str
    type: str
    format: str = "text"
    cache_dir: Path | None = None
    element_cap: int = flats.DEFAULT_ELEMENT_CAP
    workers: int = 1
    output: Path | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.element_cap < 1:
            raise ValueError("element cap must be >= 1")
        if self.workers < 1:
            raise ValueError("worker count must be >= 1")
        _parse_types(self.type)


class UsageError(ValueError):
    pass


def _parse_types(spec: str) -> list[CoxeterType]:
    parts = [s for s in spec.replace("*", "x").split("x") if s]
    if not parts:
        raise InvalidTypeError(f"empty type {spec!r}")
    return [CoxeterType.parse(p) for p in parts]


def _single_type(cfg: RunConfig) -> CoxeterType:
    types = _parse_types(cfg.type)
    if len(types) != 1:
        raise UsageError(f"command {cfg.command!r} needs an irreducible type")
    return types[0]


def _cache_path(cache_dir: Path, spec: str) -> Path:
    safe = "".join(ch if ch.isalnum() else "_" for ch in spec)
    return cache_dir / f"poset_{safe}.json"


def get_poset(cfg: RunConfig) -> flats.EvenPoset:
    spec = "x".join(str(t) for t in _parse_types(cfg.type))
    if cfg.cache_dir is not None:
        path = _cache_path(cfg.cache_dir, spec)
        if path.exists():
            return flats.load_poset(path)
    p = flats.even_poset_for(spec, element_cap=cfg.element_cap, workers=cfg.workers)
    if cfg.cache_dir is not None:
        flats.save_poset(p, _cache_path(cfg.cache_dir, spec))
    return p


# ---- rendering ----------------------------------------------------------------------

def _latex_terms(coeffs) -> str:
    out = []
    for k, c in enumerate(coeffs):
        if c == 0 and len(coeffs) > 1:
            continue
        mag = abs(c)
        body = str(mag) if k == 0 else (("" if mag == 1 else str(mag)) + ("t" if k == 1 else f"t^{{{k}}}"))
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out) if out else "0"


def _render(fmt: str, data: dict, text: str, rows: list[list] | None = None, latex: str | None = None) -> str:
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in rows or [[k, json.dumps(v, sort_keys=True)] for k, v in data.items()]:
            writer.writerow(row)
        return buf.getvalue().rstrip("\n")
    if fmt == "latex":
        return latex if latex is not None else text
    return text


# ---- commands ------------------------------------------------------------------------------

def cmd_poincare(cfg: RunConfig) -> str:
    cp = flats.char_poly(get_poset(cfg))
    c = list(cp.coefficients)
    data = {"type": cfg.type, "char_poly": c, "text": str(cp)}
    rows = [["power", "coefficient"]] + [[k, v] for k, v in enumerate(c)]
    return _render(cfg.format, data, str(cp), rows, "$" + _latex_terms(c) + "$")


def cmd_betti(cfg: RunConfig) -> str:
    b = flats.betti_numbers(get_poset(cfg))
    data = {"type": cfg.type, "betti": b}
    rows = [["degree", "betti"]] + [[k, v] for k, v in enumerate(b)]
    latex = " & ".join(map(str, b)) + r" \\"
    return _render(cfg.format, data, " ".join(map(str, b)), rows, latex)


def cmd_euler(cfg: RunConfig) -> str:
    types = _parse_types(cfg.type)
    value = flats.euler_characteristic(get_poset(cfg))
    data: dict = {"type": cfg.type, "euler": value}
    text = str(value)
    if len(types) == 1:
        ct = types[0]
        expected = None
        if ct.family in ("A", "B", "D") and ct.rank % 2 == 1:
            expected = flats.euler_closed_form(ct.family, ct.rank)
        elif ct.rank % 2 == 0:
            expected = 0
        if expected is not None:
            data["closed_form"] = expected
            data["agree"] = expected == value
            text += f" (closed form {expected}: {'agree' if expected == value else 'DISAGREE'})"
            if expected != value:
                raise flats.ConsistencyError(f"euler: poset {value} vs closed form {expected}")
    rows = [[k, v] for k, v in data.items()]
    return _render(cfg.format, data, text, rows, f"$\\chi = {value}$")


def _abd(cfg: RunConfig) -> tuple[str, int]:
    ct = _single_type(cfg)
    if ct.family not in ("A", "B", "D"):
        raise UsageError(f"command {cfg.command!r} supports types A, B and D only")
    return ct.family, ct.rank


def cmd_character(cfg: RunConfig) -> str:
    kind, n = _abd(cfg)
    if kind == "D" and n < 2:
        raise UsageError("type D needs rank >= 2")
    rep = charcalc.character_report(n, kind)
    if "fail" in rep["checks"].values():
        bad = [k for k, v in rep["checks"].items() if v == "fail"]
        raise flats.ConsistencyError(f"character checks failed: {bad}")
    lines = [f"type {rep['type']}", "betti " + " ".join(map(str, rep["betti"]))]
    for i, ch in enumerate(rep["per_degree"]):
        lines.append(f"H{i}: {ch}")
    for name, table in rep["class_table"].items():
        lines.append(f"{name} class values: " + ", ".join(f"{c}={v}" for c, v in table.items()))
    rows = [["degree", "class", "value"]]
    for name, table in rep["class_table"].items():
        for c, v in table.items():
            rows.append([name, c, v])
    return _render(cfg.format, rep, "\n".join(lines), rows)


def cmd_multiplicities(cfg: RunConfig) -> str:
    kind, n = _abd(cfg)
    if kind == "A" or n < 2:
        raise UsageError("multiplicities are defined for types B and D of rank >= 2")
    tables = [charcalc.one_dim_multiplicities(n, kind, check=False)]
    if kind == "D":
        tables.append(charcalc.one_dim_multiplicities(n, "D/WD", check=False))
    data = {"type": cfg.type, "tables": []}
    lines = []
    rows = [["group", "character", "degree", "computed", "closed_form"]]
    for t in tables:
        group = "W(D_n)" if t.kind == "D/WD" else "W(B_n)"
        entries = [
            {"character": w, "degree": i, "computed": v, "closed_form": t.closed_form[(w, i)]}
            for (w, i), v in sorted(t.computed.items())
        ]
        data["tables"].append({"group": group, "agree": t.agree, "entries": entries})
        for e in entries:
            rows.append([group, e["character"], e["degree"], e["computed"], e["closed_form"]])
            lines.append(f"{group} <H{e['degree']}, {e['character']}> = {e['computed']} (closed form {e['closed_form']})")
        lines.append(f"{group}: {'agree' if t.agree else 'DISAGREE'}")
    out = _render(cfg.format, data, "\n".join(lines), rows)
    if not all(t.agree for t in tables):
        sys.stdout.write(out + "\n")
        raise flats.ConsistencyError("one-dimensional multiplicities disagree with closed forms")
    return out


def cmd_h1(cfg: RunConfig) -> str:
    ct = _single_type(cfg)
    if ct.family != "B" or ct.rank < 2:
        raise UsageError("h1 is available for type B of rank >= 2")
    n = ct.rank
    plus, minus, trace = h1sigma.sigma_spectrum(n)
    checks = h1sigma.check_h1(n)
    data = {
        "type": cfg.type,
        "dimension": len(h1sigma.basis(n)),
        "sigma_plus": plus,
        "sigma_minus": minus,
        "sigma_trace": trace,
        "lefschetz_sigma": h1sigma.lefschetz_sigma(n),
        "checks": {k: ("pass" if v else "fail") for k, v in checks.items()},
    }
    text = "\n".join(f"{k} {v}" for k, v in data.items() if k != "checks")
    text += "\n" + "\n".join(f"{'PASS' if v else 'FAIL'} {k}" for k, v in checks.items())
    out = _render(cfg.format, data, text)
    if not all(checks.values()):
        sys.stdout.write(out + "\n")
        raise flats.ConsistencyError("H^1 model checks failed")
    return out


def cmd_poset_export(cfg: RunConfig) -> str:
    p = get_poset(cfg)
    spec = "x".join(str(t) for t in _parse_types(cfg.type))
    if cfg.output is not None:
        path = cfg.output
    else:
        path = _cache_path(cfg.cache_dir or Path("."), spec)
    flats.save_poset(p, path)
    data = {"type": spec, "path": str(path), "elements": len(p), "levels": p.level_sizes()}
    return _render(cfg.format, data, f"wrote {len(p)} elements to {path}")


def verify_checks(cfg: RunConfig) -> list[tuple[str, bool, str]]:
    """Named cross-checks for one type; each is (name, passed, detail)."""
    results: list[tuple[str, bool, str]] = []

    def run(name, fn):
        try:
            ok, detail = fn()
        except flats.ConsistencyError as exc:
            ok, detail = False, str(exc)
        results.append((name, bool(ok), detail))

    types = _parse_types(cfg.type)
    p = get_poset(cfg)
    cp = flats.char_poly(p)
    run("char_poly_constant_term", lambda: (cp.coefficients[0] == 1, str(cp)))
    run("sign_alternation", lambda: (flats.betti_numbers(cp) is not None, str(cp)))
    if len(p) <= 5000:
        run("mobius_vs_zeta_inverse", lambda: (flats.mobius_oracle(p) == p.mobius, f"{len(p)} elements"))
    run("purity", lambda: (flats.is_pure(p), str(p.level_sizes())))
    if len(types) == 1:
        ct = types[0]
        n = ct.rank
        if p.rs is not None:
            run("semimodularity", lambda: (flats.semimodularity_check(p), ""))
        if n % 2 == 0:
            run("euler_even_rank_zero", lambda: (cp(1) == 0, str(cp(1))))
        if ct.family == "A":
            run("type_A_product_formula", lambda: (cp == flats.typeA_char_poly_product(n), str(cp)))
            if n % 2:
                run("euler_closed_form", lambda: (cp(1) == flats.euler_closed_form("A", n), str(cp(1))))
            if n + 1 <= 8:
                run("dimension_bridge", lambda: (charcalc.typeA_graded_ch(n + 1).dims() == flats.betti_numbers(cp), ""))
        if ct.family == "B":
            run("type_B_closed_sum", lambda: (cp == flats.typeB_char_poly_closed(n), str(cp)))
            if n <= 7:
                run("dowling_oracle", lambda: (_dowling_agrees(p, n), ""))
                run("dimension_bridge", lambda: (charcalc.typeB_graded_ch(n).dims() == flats.betti_numbers(cp), ""))
            if n % 2:
                run("euler_closed_form", lambda: (cp(1) == flats.euler_closed_form("B", n), str(cp(1))))
            if 2 <= n <= 7:
                run("one_dim_multiplicities", lambda: (charcalc.one_dim_multiplicities(n, "B").agree, ""))
                run("h1_model", lambda: (all(h1sigma.check_h1(n).values()), ""))
                run("euler_character", lambda: (charcalc.euler_character_B(n) == charcalc.alternating_class_function(charcalc.typeB_graded_ch(n)), ""))
        if ct.family == "D" and n >= 3:
            run("d_relation", lambda: (flats.d_relation_check(n) is not None, ""))
            if n % 2:
                run("euler_closed_form", lambda: (cp(1) == flats.euler_closed_form("D", n), str(cp(1))))
            if n <= 7:
                run("dimension_bridge", lambda: (charcalc.typeD_graded_ch(n).dims() == flats.betti_numbers(cp), ""))
                run("one_dim_multiplicities", lambda: (charcalc.one_dim_multiplicities(n, "D").agree, ""))
    return results


def _dowling_agrees(p: flats.EvenPoset, n: int) -> bool:
    d = flats.dowling_even_poset(n)
    return sorted(d.masks) == sorted(p.masks) and d.cover_counts() == p.cover_counts() and flats.char_poly(d) == flats.char_poly(p)


def cmd_verify(cfg: RunConfig) -> str:
    results = verify_checks(cfg)
    data = {"type": cfg.type, "checks": {name: ("pass" if ok else "fail") for name, ok, _ in results}}
    text = "\n".join(f"{'PASS' if ok else 'FAIL'} {name}" + (f" ({detail})" if detail else "") for name, ok, detail in results)
    rows = [["check", "result"]] + [[name, "pass" if ok else "fail"] for name, ok, _ in results]
    out = _render(cfg.format, data, text, rows)
    failed = [name for name, ok, _ in results if not ok]
    if failed:
        sys.stdout.write(out + "\n")
        raise flats.ConsistencyError(f"failed checks: {', '.join(failed)}")
    return out


HANDLERS = {
    "poincare": cmd_poincare,
    "betti": cmd_betti,
    "euler": cmd_euler,
    "character": cmd_character,
    "multiplicities": cmd_multiplicities,
    "h1": cmd_h1,
    "poset-export": cmd_poset_export,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realdcp", description="Cohomology of real wonderful models of Coxeter arrangements.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--type", "-t", required=True, help="Coxeter type such as B5, E7, H3, I2(5), or a product A1xB3")
    parser.add_argument("--format", "-f", choices=FORMATS, default="text")
    parser.add_argument("--cache-dir", type=Path, default=None, help=f"poset cache directory (default: ${CACHE_ENV})")
    parser.add_argument("--element-cap", type=int, default=flats.DEFAULT_ELEMENT_CAP)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--output", "-o", type=Path, default=None, help="file written by poset-export")
    return parser


def run(cfg: RunConfig) -> str:
    return HANDLERS[cfg.command](cfg)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cache = args.cache_dir
    if cache is None and os.environ.get(CACHE_ENV):
        cache = Path(os.environ[CACHE_ENV])
    try:
        cfg = RunConfig(args.command, args.type, args.format, cache, args.element_cap, args.workers, args.output)
        out = run(cfg)
    except (InvalidTypeError, UsageError, ValueError) as exc:
        print(f"realdcp: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except flats.ResourceLimitError as exc:
        print(f"realdcp: {exc}", file=sys.stderr)
        print(json.dumps({"level_counts": exc.level_counts}), file=sys.stderr)
        return EXIT_CAP
    except flats.ConsistencyError as exc:
        print(f"realdcp: consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    sys.stdout.write(out + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
