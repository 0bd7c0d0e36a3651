"""JSON spec files in, reports and artifacts out.

A spec file bundles one algebra with everything needed to compute on it::

    {
      "field":       {"p": 5, "k": 1, "modulus": [0, 1]},
      "group":       {"cyclic_orders": []},
      "bicharacter": {"table": [[scalar]]},
      "algebra":     {"type": "gl", "dims": {"": 2}},
      "character":   {"values": [[i, scalar]], "fclasses": []},
      "sweep":       {"over": ["e_11"], "fix": {"e_22": scalar}},
      "options":     {"oracle": true, "seed": 0}
    }

"field" and "algebra" are required; the rest default to the trivial group,
the all-one bicharacter, the zero character, the full weight sweep and
empty options.  A scalar is the little-endian digit list of length k.  gl
"dims" keys are the comma-joined coordinates of a group element ("" for
the trivial group).  An explicit algebra gives the data directly::

    {"type": "explicit", "basis": ["x"], "degrees": [[0]],
     "structure": [[i, j, [[t, scalar]]]], "pmap": [[i, [[t, scalar]]]]}

Unknown keys anywhere in the file are rejected.  Recognized options:
oracle, seed, max_dim, singular_cutoff, samples, enumerate, levi.

Exit codes: 0 success, 1 a validation or agreement check failed, 2 bad
input.  Errors print one JSON object on stderr carrying the stable machine
code of the exception class.
"""

import argparse
import csv
import json
import os
import sys
import time

from .algebra import ColorAlgebra, make_gl, standardize_character, validate_algebra
from .envelope import (chi_reduce, frobenius_gram, harish_chandra,
                       nf_monomial, uchi_basis)
from .errors import ColorLieError, NotStandard, SpecError, TooLarge
from .field import Field
from .groups import Bicharacter, GradedGroup, trivial_bicharacter
from .repmod import (PCharacter, PowerClass, admissible_lambdas, f_closed,
                     f_via_hc, fp_order, is_simple, pchar_zero, root_datum,
                     verma_build)

DEFAULT_MAX_DIM = 2000

_TOP_KEYS = {"field", "group", "bicharacter", "algebra", "character",
             "sweep", "options"}
_OPTION_KEYS = {"oracle", "seed", "max_dim", "singular_cutoff", "samples",
                "enumerate", "levi"}


# -- spec-file ingestion ----------------------------------------------------------

def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _reject_unknown(section, allowed, where):
    if not isinstance(section, dict):
        raise SpecError("%s must be a JSON object" % where)
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise SpecError("unknown %s key(s): %s" % (where, ", ".join(unknown)))


def _group_key(group, key):
    coords = () if key == "" else tuple(int(x) for x in key.split(","))
    return group.element(coords)


def _terms(F, pairs, where):
    out = {}
    for entry in pairs:
        if len(entry) != 2:
            raise SpecError("%s entries are [index, scalar] pairs" % where)
        i, s = entry
        out[int(i)] = F.from_wire(s)
    return out


def _character(algebra, section):
    _reject_unknown(section, {"values", "fclasses"}, "character")
    F = algebra.F
    linear = _terms(F, section.get("values", []), "character values")
    classes = []
    for fc in section.get("fclasses", []):
        _reject_unknown(fc, {"degree", "xi", "c", "s"}, "fclasses")
        classes.append(PowerClass(algebra.group.element(tuple(fc["degree"])),
                                  int(fc["xi"]),
                                  _terms(F, fc["c"], "class functional"),
                                  int(fc["s"])))
    return PCharacter(algebra, linear=linear, fclasses=classes)


def load_spec(path, strict=True):
    """Parse a spec file into live objects.

    With strict=True (every subcommand except `validate`) a bicharacter or
    explicit-algebra axiom violation is an input error; `validate` loads
    non-strictly and reports the violations itself.
    """
    data = _load_json(path)
    _reject_unknown(data, _TOP_KEYS, "spec file")
    for key in ("field", "algebra"):
        if key not in data:
            raise SpecError("spec file needs a %r section" % key)

    fsec = data["field"]
    _reject_unknown(fsec, {"p", "k", "modulus"}, "field")
    F = Field(int(fsec["p"]), int(fsec.get("k", 1)), fsec.get("modulus"))

    gsec = data.get("group", {"cyclic_orders": []})
    _reject_unknown(gsec, {"cyclic_orders"}, "group")
    G = GradedGroup([int(n) for n in gsec["cyclic_orders"]])

    bsec = data.get("bicharacter")
    if bsec is None:
        eps = trivial_bicharacter(G, F)
    else:
        _reject_unknown(bsec, {"table"}, "bicharacter")
        table = [[F.from_wire(s) for s in row] for row in bsec["table"]]
        eps = Bicharacter(G, F, table)
    if strict:
        report = eps.validate()
        if report:
            raise SpecError("bicharacter axioms fail: %s" % report[0][-1])

    asec = data["algebra"]
    kind = asec.get("type")
    if kind == "gl":
        _reject_unknown(asec, {"type", "dims"}, "algebra")
        dims = {_group_key(G, key): int(mult)
                for key, mult in asec["dims"].items()}
        A = make_gl(eps, dims)
    elif kind == "explicit":
        _reject_unknown(asec, {"type", "basis", "degrees", "structure",
                               "pmap"}, "algebra")
        structure = {}
        for row in asec.get("structure", []):
            i, j, terms = row
            structure[(int(i), int(j))] = _terms(F, terms, "structure")
        pmap = {int(i): _terms(F, terms, "pmap")
                for i, terms in asec.get("pmap", [])}
        A = ColorAlgebra(eps, list(asec["basis"]),
                         [tuple(int(x) for x in d) for d in asec["degrees"]],
                         structure, pmap=pmap)
        if strict:
            report = validate_algebra(A)
            if report:
                raise SpecError("algebra axioms fail: %s" % report[0][-1])
    else:
        raise SpecError("algebra type must be 'gl' or 'explicit', got %r"
                        % kind)

    options = data.get("options", {})
    _reject_unknown(options, _OPTION_KEYS, "options")
    chi = None
    if "character" in data:
        chi = _character(A, data["character"])
    return {"field": F, "group": G, "eps": eps, "algebra": A,
            "character": chi, "sweep": data.get("sweep"), "options": options}


# -- shared plumbing --------------------------------------------------------------

def _resolve_chi(args, bundle):
    A = bundle["algebra"]
    choice = getattr(args, "chi", None)
    if choice == "zero":
        return pchar_zero(A)
    if choice:
        return _character(A, _load_json(choice))
    if bundle["character"] is not None:
        return bundle["character"]
    return pchar_zero(A)


def _resolve_max_dim(args, options):
    if getattr(args, "max_dim", None) is not None:
        return args.max_dim
    env = os.environ.get("COLORLIE_MAX_DIM")
    if env:
        return int(env)
    return int(options.get("max_dim", DEFAULT_MAX_DIM))


def _resolve_seed(args, options):
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int(options.get("seed", 0))


def _resolve_triple(algebra, options):
    levi = [algebra.index_of(n) if isinstance(n, str) else int(n)
            for n in options.get("levi", [])]
    return fp_order(algebra, levi=levi)


def _parse_lambda(F, text, count):
    parts = text.split(",")
    if len(parts) != count:
        raise SpecError("--lambda needs %d comma-separated scalars, got %d"
                        % (count, len(parts)))
    return tuple(F.from_wire([int(x) for x in part.split(";")])
                 for part in parts)


def _element_wire(F, terms):
    return [[list(m), F.to_wire(c)] for m, c in sorted(terms.items())]


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2) + "\n"
    sys.stdout.write(text)
    if out:
        with open(out, "w") as fh:
            fh.write(text)


def _fail(code, message, **detail):
    err = {"code": code, "message": message}
    if detail:
        err["detail"] = detail
    sys.stderr.write(json.dumps({"error": err}) + "\n")


# -- subcommands ------------------------------------------------------------------

def _cmd_validate(args):
    bundle = load_spec(args.spec, strict=False)
    report = {
        "bicharacter": bundle["eps"].validate(),
        "algebra": validate_algebra(bundle["algebra"]),
    }
    report["ok"] = not report["bicharacter"] and not report["algebra"]
    _emit(report, args.out)
    return 0 if report["ok"] else 1


def _cmd_basis(args):
    bundle = load_spec(args.spec)
    spec = chi_reduce(bundle["algebra"], _resolve_chi(args, bundle))
    count, it = uchi_basis(spec)
    report = {"dim": count, "caps": list(spec.caps)}
    if bundle["options"].get("enumerate"):
        if count > _resolve_max_dim(args, bundle["options"]):
            raise TooLarge("refusing to enumerate %d monomials" % count,
                           dimension=count)
        report["monomials"] = [list(m) for m in it]
    _emit(report, args.out)
    return 0


def _cmd_hc(args):
    bundle = load_spec(args.spec)
    A = bundle["algebra"]
    spec = chi_reduce(A, _resolve_chi(args, bundle))
    u = None
    for mono, s in _load_json(args.element):
        t = nf_monomial(A, mono, spec).scale(A.F.from_wire(s))
        u = t if u is None else u.add(t)
    if u is None:
        raise SpecError("element file holds no terms")
    gamma = harish_chandra(u)
    _emit({"element": _element_wire(A.F, u.terms),
           "gamma": _element_wire(A.F, gamma.terms)}, args.out)
    return 0


def _cmd_frobenius(args):
    bundle = load_spec(args.spec)
    spec = chi_reduce(bundle["algebra"], _resolve_chi(args, bundle))
    rep = frobenius_gram(spec, max_dim=_resolve_max_dim(args,
                                                        bundle["options"]))
    _emit({"dimension": rep["dimension"], "rank": rep["rank"],
           "nondegenerate": rep["nondegenerate"],
           "color_symmetric": rep["color_symmetric"],
           "tau": list(rep["tau"])}, args.out)
    return 0 if rep["nondegenerate"] else 1


def _cmd_fp_order(args):
    bundle = load_spec(args.spec)
    A = bundle["algebra"]
    trip = _resolve_triple(A, bundle["options"])
    _emit({"levi": [[t, A.names[t]] for t in trip.levi],
           "deltas": [[t, A.names[t]] for t in trip.deltas],
           "roots": [list(r) for r in trip.delta_roots()],
           "certificates": trip.certificates}, args.out)
    return 0


def _cmd_standardize(args):
    bundle = load_spec(args.spec)
    A = bundle["algebra"]
    chi = _resolve_chi(args, bundle)
    if chi.fclasses:
        raise NotStandard("standard form reduction works on linear "
                          "characters")
    std = standardize_character(A, [chi.value(i) for i in range(A.dim)])
    _emit({"chi_s": [[i, A.F.to_wire(c)]
                     for i, c in sorted(std.chi_s.items())],
           "chi_n": [[i, A.F.to_wire(c)]
                     for i, c in sorted(std.chi_n.items())],
           "witness_g": std.witness_g.a.tolist()}, args.out)
    return 0


def _cmd_verma(args):
    bundle = load_spec(args.spec)
    A = bundle["algebra"]
    options = bundle["options"]
    spec = chi_reduce(A, _resolve_chi(args, bundle))
    trip = _resolve_triple(A, options)
    if args.lam is None:
        raise SpecError("verma needs --lambda")
    lam = _parse_lambda(A.F, args.lam, len(root_datum(A).cartan))
    M = verma_build(spec, trip, weight=lam,
                    max_dim=_resolve_max_dim(args, options))
    verdict = is_simple(M,
                        max_enumerate=int(options.get("singular_cutoff", 3)),
                        samples=int(options.get("samples", 40)),
                        seed=_resolve_seed(args, options))
    _emit({"module": M.to_wire(), "simple": verdict}, args.out)
    return 0


def _sweep_restriction(section, cnames, F):
    """Cartan positions pinned by the spec file's sweep section."""
    if not section:
        return {}
    _reject_unknown(section, {"over", "fix"}, "sweep")
    pos = {n: t for t, n in enumerate(cnames)}
    fix = section.get("fix", {})
    for n in fix:
        if n not in pos:
            raise SpecError("sweep fixes %r, which is not a Cartan letter"
                            % n)
    over = section.get("over")
    if over is not None:
        for n in over:
            if n not in pos:
                raise SpecError("sweep ranges over %r, which is not a "
                                "Cartan letter" % n)
            if n in fix:
                raise SpecError("sweep both ranges over and fixes %r" % n)
        loose = sorted(set(cnames) - set(over) - set(fix))
        if loose:
            raise SpecError("sweep leaves %s neither ranged nor fixed"
                            % ", ".join(loose))
    return {pos[n]: F.from_wire(s) for n, s in fix.items()}


def _write_sweep_csv(path, cnames, rows):
    def scalar(s):
        return ";".join(str(d) for d in s)

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lambda_%s" % n for n in cnames]
                   + ["f_closed", "f_hc", "oracle", "agree"])
        for r in rows:
            w.writerow([scalar(s) for s in r["lambda"]]
                       + [scalar(r["f_closed"]), scalar(r["f_hc"]),
                          r["oracle"] or "",
                          "true" if r["agree"] else "false"])


def _cmd_sweep(args):
    bundle = load_spec(args.spec)
    A = bundle["algebra"]
    F = A.F
    options = bundle["options"]
    spec = chi_reduce(A, _resolve_chi(args, bundle))
    trip = _resolve_triple(A, options)
    cnames = [A.names[h] for h in root_datum(A).cartan]
    fixed = _sweep_restriction(bundle["sweep"], cnames, F)
    oracle = args.oracle
    if oracle is None:
        oracle = bool(options.get("oracle", True))
    seed = _resolve_seed(args, options)
    max_dim = _resolve_max_dim(args, options)
    cutoff = int(options.get("singular_cutoff", 3))
    samples = int(options.get("samples", 40))

    rows = []
    simple_count = 0
    disagreements = 0
    for lam in admissible_lambdas(spec):
        if any(lam[n] != c for n, c in fixed.items()):
            continue
        t0 = time.perf_counter()
        fc = f_closed(spec, trip, lam)
        fh, _rev = f_via_hc(spec, trip, lam)
        agree = (fc == 0) == (fh == 0)
        verdict = None
        if oracle:
            M = verma_build(spec, trip, weight=lam, check=False,
                            max_dim=max_dim)
            v = is_simple(M, max_enumerate=cutoff, samples=samples,
                          seed=seed)
            verdict = "simple" if v["simple"] else "not-simple"
            simple_count += v["simple"]
            agree = agree and ((fc == 0) == (not v["simple"]))
        ms = (time.perf_counter() - t0) * 1000.0
        disagreements += not agree
        rows.append({"lambda": [F.to_wire(c) for c in lam],
                     "f_closed": F.to_wire(fc), "f_hc": F.to_wire(fh),
                     "oracle": verdict, "agree": agree, "ms": round(ms, 3)})

    report = {"rows": rows,
              "summary": {"rows": len(rows),
                          "simple": simple_count if oracle else None,
                          "disagreements": disagreements}}
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    if args.out:
        _write_sweep_csv(args.out, cnames, rows)
    return 1 if disagreements else 0


# -- entry point ------------------------------------------------------------------

def _build_parser():
    ap = argparse.ArgumentParser(
        prog="colorlie",
        description="Exact computations with restricted Lie color algebras "
                    "over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help, chi=False):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("spec", help="path to the JSON spec file")
        sp.add_argument("--out", help="also write the artifact here")
        sp.add_argument("--max-dim", type=int, default=None,
                        help="exact-linear-algebra size guard "
                             "(default %d, env COLORLIE_MAX_DIM)"
                             % DEFAULT_MAX_DIM)
        if chi:
            sp.add_argument("--chi", metavar="FILE|zero",
                            help="character file, or 'zero'")
        sp.set_defaults(func=fn)
        return sp

    add("validate", _cmd_validate, "bicharacter + algebra axiom report")
    add("basis", _cmd_basis, "reduced-quotient dimension and caps", chi=True)
    hc = add("hc", _cmd_hc, "Cartan read-off of a normal-form element",
             chi=True)
    hc.add_argument("element", help="JSON file: [[exponents, scalar], ...]")
    add("frobenius", _cmd_frobenius,
        "Gram rank / color symmetry of the top-coefficient pairing",
        chi=True)
    add("fp-order", _cmd_fp_order,
        "induction ordering of the non-Levi positive roots")
    add("standardize", _cmd_standardize,
        "conjugate a degree-zero character to standard form", chi=True)
    verma = add("verma", _cmd_verma,
                "induced module dump plus simplicity verdict", chi=True)
    verma.add_argument("--lambda", dest="lam", metavar="SCALARS",
                       help="highest weight: comma-separated scalars in "
                            "Cartan order, digits joined by ';'")
    verma.add_argument("--seed", type=int, default=None,
                       help="seed for the randomized singular-line fallback")
    sweep = add("sweep", _cmd_sweep,
                "per-weight simplicity table (CSV artifact + JSON report)",
                chi=True)
    sweep.add_argument("--oracle", action=argparse.BooleanOptionalAction,
                       default=None,
                       help="run the brute-force verdict per row")
    sweep.add_argument("--seed", type=int, default=None,
                       help="seed for the randomized singular-line fallback")
    return ap


def cli_main(argv=None):
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ColorLieError as exc:
        _fail(exc.code, str(exc), **exc.detail)
        return 2
    except FileNotFoundError as exc:
        _fail("missing_file", str(exc))
        return 2
    except json.JSONDecodeError as exc:
        _fail("bad_json", str(exc))
        return 2
    except (KeyError, TypeError, ValueError) as exc:
        _fail("bad_input", "%s: %s" % (type(exc).__name__, exc))
        return 2


def main():
    raise SystemExit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
