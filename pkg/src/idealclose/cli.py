"""``idealclose`` command-line interface.

Exit status: 0 success, 2 parse or usage error, 3 mathematical failure
(uncovered region, member outside J, invalid certificate), 4 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

from . import certify as cert_mod
from .certify import (
    Certificate,
    CoverageError,
    MembershipLattice,
    certify_equal,
    check_certificate,
    default_scan_box,
    scan,
)
from .dsl import DSLError, ProblemSpec, parse_problem
from .family import LatticeTooLargeError, bound, finite_generators, instantiate, lattice_points
from .genfunc import family_gf
from .groebner import ResourceLimitError, buchberger, is_member
from .polyring import ExponentOverflowError, MonomialOrder

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_MATH = 3
EXIT_RESOURCE = 4

COMMANDS = ("bound", "generators", "gb", "member", "genfun", "scan", "certify", "check")


@dataclass
class CommandResult:
    status: int
    text: str
    data: dict = field(default_factory=dict)


def emit_scan_csv(lattice: MembershipLattice, path) -> None:
    """Write ``m1,...,mq,member`` rows in lexicographic order, members as 0/1."""
    q = len(lattice.box)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"m{j + 1}" for j in range(q)] + ["member"])
        for m in lattice_points(lattice.box):
            w.writerow(list(m) + [int(lattice.entries[m])])


def _vec(v, n: int) -> tuple:
    v = tuple(v)
    return v * n if len(v) == 1 else v


def _label(name: str, idx) -> str:
    return f"{name}({', '.join(map(str, idx))})"


def _bound_text(ell) -> str:
    return str(ell[0]) if len(ell) == 1 else "(" + ", ".join(map(str, ell)) + ")"


def _target(spec: ProblemSpec):
    """The family whose members should lie in J, with its name and parameter count."""
    if spec.substitution is not None:
        return spec.compose_name, spec.composed.instantiate, spec.substitution.inner_param_count
    return spec.family_name, lambda n: instantiate(spec.family, n), spec.family.num_params


def _j_generators(spec: ProblemSpec, k0) -> List[tuple]:
    """(label, polynomial) pairs spanning the candidate ideal J."""
    if spec.ideal:
        out = []
        for name, idx in spec.ideal:
            if name == spec.family_name:
                out.append((_label(name, idx), instantiate(spec.family, idx)))
            else:
                out.append((_label(name, idx), spec.composed.instantiate(idx)))
        return out
    name, inst, p = _target(spec)
    if k0 is not None:
        return [(_label(name, n), inst(n)) for n in lattice_points(_vec(k0, p))]
    ell = bound(spec.family)
    return [(_label(spec.family_name, n), instantiate(spec.family, n)) for n in lattice_points(ell)]


def run_command(spec: ProblemSpec, command: str, *, order: Optional[str] = None, k0=None, k1=None,
                stride_max: Optional[int] = None, json_out: bool = False, csv_path=None,
                index=None, cert_text: Optional[str] = None) -> CommandResult:
    order = MonomialOrder(order or spec.order or "grevlex")
    k0 = k0 if k0 is not None else spec.k0
    k1 = k1 if k1 is not None else spec.k1
    stride_max = stride_max or spec.stride_max or 6
    fam = spec.family
    q = fam.num_params

    if command == "bound":
        ell = bound(fam)
        return CommandResult(EXIT_OK, f"l = {_bound_text(ell)}", {"bound": list(ell)})

    if command == "generators":
        ell = bound(fam)
        gens = finite_generators(fam)
        lines = [f"l = {_bound_text(ell)}; {len(gens)} generator(s)"]
        lines += [str(g) for g in gens]
        return CommandResult(EXIT_OK, "\n".join(lines),
                             {"bound": list(ell), "generators": [str(g) for g in gens]})

    if command == "gb":
        labelled = _j_generators(spec, k0)
        gb = buchberger([g for _, g in labelled], order)
        lines = [f"J = <{', '.join(l for l, _ in labelled)}>", f"reduced {order} basis ({len(gb)} elements):"]
        lines += [f"  {g}" for g in gb.generators]
        return CommandResult(EXIT_OK, "\n".join(lines), {
            "order": order.kind,
            "J": [l for l, _ in labelled],
            "basis": [str(g) for g in gb.generators],
        })

    if command == "member":
        name, inst, p = _target(spec)
        if index is None:
            return CommandResult(EXIT_PARSE, "member needs --index")
        idx = _vec(index, p)
        labelled = _j_generators(spec, k0)
        gb = buchberger([g for _, g in labelled], order)
        ok = is_member(inst(idx), gb)
        text = f"{_label(name, idx)} {'is' if ok else 'is not'} in J = <{', '.join(l for l, _ in labelled)}>"
        return CommandResult(EXIT_OK, text, {"index": list(idx), "member": ok})

    if command == "genfun":
        gf = family_gf(fam)
        text = f"numerator: {gf.numerator_text()}\ndenominator: {gf.denominator_text()}"
        return CommandResult(EXIT_OK, text, {
            "numerator": gf.numerator_text(),
            "denominator": gf.denominator_text(),
            "numerator_terms": {",".join(map(str, k)): str(v) for k, v in sorted(gf.numerator.items())},
        })

    if command == "scan":
        labelled = _j_generators(spec, k0)
        if k1 is not None:
            box = _vec(k1, q)
        elif spec.substitution is not None and k0 is not None:
            box = default_scan_box(spec.composed, _vec(k0, spec.substitution.inner_param_count))
        else:
            box = tuple(l + 2 for l in bound(fam))
        lattice = scan(fam, [g for _, g in labelled], box, order)
        if csv_path:
            emit_scan_csv(lattice, csv_path)
        return CommandResult(EXIT_OK, _lattice_text(spec.family_name, lattice), {
            "J": [l for l, _ in labelled],
            "box": list(box),
            "members": [list(m) for m in lattice.members()],
        })

    if command in ("certify", "check"):
        composed = spec.composed
        if composed is None:
            composed = cert_mod.ComposedFamily(fam, cert_mod.SubstitutionMap.identity(fam.param_names))
        p = composed.num_params
        if command == "check" and cert_text is not None:
            cert = Certificate.from_json(cert_text)
        else:
            if k0 is None:
                return CommandResult(EXIT_PARSE, f"{command} needs k0 (in the problem file or --k0)")
            cert = certify_equal(composed, _vec(k0, p), None if k1 is None else _vec(k1, q),
                                 stride_max, order)
            if csv_path:
                emit_scan_csv(cert.lattice, csv_path)
        if command == "certify":
            if json_out:
                return CommandResult(EXIT_OK, cert.to_json(), json.loads(cert.to_json()))
            return CommandResult(EXIT_OK, _certificate_text(spec, cert), json.loads(cert.to_json()))
        result = check_certificate(cert, composed, order)
        status = EXIT_OK if result.ok else EXIT_MATH
        text = "certificate valid" if result.ok else f"certificate INVALID: {result.reason}"
        return CommandResult(status, text, {"valid": result.ok, "reason": result.reason})

    return CommandResult(EXIT_PARSE, f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")


def _lattice_text(name: str, lattice: MembershipLattice) -> str:
    box = lattice.box
    if len(box) == 1:
        members = [str(m[0]) for m in lattice.members()]
        return f"{name}(m) in J for m in 0..{box[0]}: " + " ".join(members)
    if len(box) == 2:
        rows = [f"{name}(m1, m2) in J ('#'), m1 = 0..{box[0]} left to right, m2 = {box[1]}..0 top to bottom:"]
        for m2 in range(box[1], -1, -1):
            rows.append(f"{m2:>3} " + "".join("#" if lattice.entries[(m1, m2)] else "." for m1 in range(box[0] + 1)))
        return "\n".join(rows)
    return "\n".join(f"{_label(name, m)}" for m in lattice.members())


def _certificate_text(spec: ProblemSpec, cert: Certificate) -> str:
    target = spec.compose_name or spec.family_name
    lines = [
        f"I = J where J = <{', '.join(_label(target, n) for n in cert.j_indices)}>",
        f"scan box {_bound_text(cert.lattice.box)}: {len(cert.lattice.members())} members of J",
        "certified progressions:",
    ]
    for c in cert.shift_certs:
        lines.append(f"  {c.describe().replace('g(', spec.family_name + '(', 1)} in J for all k (bound {_bound_text(c.verified_bound)})")
    for f in cert.residue_facts:
        res = ", ".join(str(r if len(r) > 1 else r[0]) for r in sorted(f.covered_residues))
        lines.append(f"residue fact: image of phi mod {f.modulus} lies in {{{res}}}")
    lines.append(f"frontier {_bound_text(cert.frontier)}; small cases checked directly: "
                 + ", ".join(str(n if len(n) > 1 else n[0]) for n in cert.small_cases))
    return "\n".join(lines)


def _parse_vector(text: str) -> tuple:
    text = text.strip().strip("()")
    try:
        vals = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like '3' or '3,2', got {text!r}")
    if not vals or any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError(f"expected non-negative integers, got {text!r}")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="idealclose", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("problem", type=Path, help="problem file (.prob)")
    ap.add_argument("--order", choices=("grevlex", "grlex", "lex"))
    ap.add_argument("--k0", type=_parse_vector, help="J = <f(n) : n <= k0>")
    ap.add_argument("--k1", type=_parse_vector, help="scan box for the outer family")
    ap.add_argument("--stride-max", type=int, help="largest progression stride searched")
    ap.add_argument("--index", type=_parse_vector, help="member: index of the family member to test")
    ap.add_argument("--cert", type=Path, help="check: certificate JSON to verify")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    ap.add_argument("--csv", type=Path, help="scan/certify: write the membership lattice as CSV")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = parse_problem(args.problem.read_text(encoding="utf-8"))
    except DSLError as exc:
        print(f"{args.problem}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"cannot read {args.problem}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        cert_text = args.cert.read_text(encoding="utf-8") if args.cert else None
        result = run_command(
            spec, args.command, order=args.order, k0=args.k0, k1=args.k1,
            stride_max=args.stride_max, json_out=args.json, csv_path=args.csv,
            index=args.index, cert_text=cert_text,
        )
    except CoverageError as exc:
        print(f"not certified: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (ResourceLimitError, LatticeTooLargeError, ExponentOverflowError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = sys.stdout if result.status == EXIT_OK else sys.stderr
    if args.json and args.command != "certify":
        print(json.dumps(result.data, indent=2), file=out)
    else:
        print(result.text, file=out)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
