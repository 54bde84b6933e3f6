"""Command-line front end: benchmarks, diagram I/O, evaluation, sampling.

Inputs to eval/validate/export/op/sample are either dump files (see
serialize) or family names: EXP_n, W_l (Walsh), H_l (Hadamard), I_l
(identity), X_l (NOT), ZERO_k, ONE_k.  The parameter is the variable
count for EXP and the level otherwise.  Families pick a sensible
instance when --instance is not given (rational, except float for H).

Benchmark reports use the row schema
suite,bench,param,instance,time_s,groupings,vertices,edges,total,status
in both CSV and JSON.  Sizes and statuses are deterministic; wall times
are not, so byte-identical reruns hold for every command except bench.
"""

import argparse
import json
import os
import random
import sys
import time

from .core import Forest, evaluate, size, validate
from .construct import (exp_family, hadamard_family, identity_matrix,
                        not_matrix, walsh_family)
from .matrix import kronecker, matrix_multiply
from .pointwise import add, multiply, subtract
from .quantum import (bernstein_vazirani, build_gate, deutsch_jozsa, ghz,
                      measure, parse_circuit, qft, run_circuit)
from .sampling import SampleContext, measure_view, sample_assignment
from .serialize import dump_diagram, export_dot, load_diagram
from .semifield import field_by_name

REPORT_FIELDS = ("suite", "bench", "param", "instance", "time_s",
                 "groupings", "vertices", "edges", "total", "status")

_QUANTUM_CAPS = {"GHZ": 4096, "BV": 256, "DJ": 256, "QFT": 16}
_QUANTUM_DEFAULTS = {"GHZ": (16, 256, 4096), "BV": (8, 64, 256),
                     "DJ": (8, 64, 256), "QFT": (4, 8, 16)}


def _family(forest, name, nvars):
    """Build NAME_n where n counts boolean variables (a power of two)."""
    if nvars < 1 or nvars & (nvars - 1):
        raise ValueError(f"variable count {nvars} is not a power of two")
    if name == "EXP":
        return exp_family(forest, nvars)
    level = nvars.bit_length() - 1
    if name == "ZERO":
        return forest.zero_diagram(level)
    if name == "ONE":
        return forest.one_diagram(level)
    if level < 1:
        raise ValueError(f"{name}_{nvars}: matrices need at least 2 variables")
    if name == "W":
        return walsh_family(forest, level)
    if name == "H":
        return hadamard_family(forest, level)
    if name == "I":
        return identity_matrix(forest, level)
    return not_matrix(forest, level)


def _parse_family(text):
    head, _, tail = text.rpartition("_")
    if not head or not tail.isdigit():
        return None
    name = head.upper()
    if name not in ("EXP", "W", "H", "I", "X", "NOT", "ZERO", "ONE"):
        return None
    return name, int(tail)


def _resolve(text, instance, forest=None):
    """Diagram from a dump path or family name, plus its forest."""
    if os.path.exists(text):
        with open(text, "r", encoding="utf-8") as fh:
            content = fh.read()
        d = load_diagram(content, forest)
        return d, d.forest
    fam = _parse_family(text)
    if fam is None:
        raise ValueError(f"{text!r} is neither a file nor a family name "
                         "(EXP_n, W_n, H_n, I_n, X_n, ZERO_n, ONE_n; "
                         "n = variable count)")
    name, param = fam
    if forest is None:
        if instance is None:
            instance = "float" if name == "H" else "rational"
        forest = Forest(field_by_name(instance))
    return _family(forest, name, param), forest


def _write(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- bench -------------------------------------------------------------------


def _report_rows(rows, fmt, out):
    if fmt == "json":
        _write(json.dumps(rows, indent=2) + "\n", out)
        return
    lines = [",".join(REPORT_FIELDS)]
    for row in rows:
        lines.append(",".join(str(row[f]) for f in REPORT_FIELDS))
    _write("\n".join(lines) + "\n", out)


def _row(suite, bench, param, instance, dt, report, status):
    return {
        "suite": suite, "bench": bench, "param": param, "instance": instance,
        "time_s": round(dt, 4) if dt is not None else "",
        "groupings": report.groupings if report else "",
        "vertices": report.vertices if report else "",
        "edges": report.edges if report else "",
        "total": report.total if report else "",
        "status": status,
    }


def _run_units(suite, units, timeout):
    """Execute (bench, param, instance, thunk) units under a shared policy.

    The timeout is cooperative: a unit that overruns is reported as a
    timeout and larger parameters of the same benchmark are skipped,
    but the suite always continues.
    """
    rows = []
    timed_out = set()
    for bench, param, instance, thunk in units:
        if bench in timed_out:
            rows.append(_row(suite, bench, param, instance, None, None,
                             "timeout"))
            continue
        start = time.perf_counter()
        try:
            diagram = thunk()
            dt = time.perf_counter() - start
            status = "ok" if dt <= timeout else "timeout"
        except Exception as e:  # any failure becomes a row, never an abort
            dt = time.perf_counter() - start
            print(f"{bench} param {param}: {e}", file=sys.stderr)
            rows.append(_row(suite, bench, param, instance, dt, None,
                             "error"))
            continue
        if status == "timeout":
            timed_out.add(bench)
        rows.append(_row(suite, bench, param, instance, dt, size(diagram),
                         status))
    return rows


def _synthetic_units(params, instance):
    field = field_by_name(instance)
    forest = Forest(field)

    def b1(l):
        return lambda: add(identity_matrix(forest, l), not_matrix(forest, l))

    def b2(l):
        m = 1 << (l - 1)
        return lambda: matrix_multiply(
            build_gate(forest, ("CNOT", 0, m - 1), m),
            build_gate(forest, ("CNOT", m // 2 - 1, m // 2), m))

    def b3(l):
        def go():
            result = matrix_multiply(hadamard_family(forest, l),
                                     hadamard_family(forest, l))
            if result is not identity_matrix(forest, l):
                raise ValueError("H x H is not the identity")
            return result
        return go

    def b4(l):
        return lambda: add(
            matrix_multiply(hadamard_family(forest, l),
                            identity_matrix(forest, l)),
            matrix_multiply(identity_matrix(forest, l),
                            not_matrix(forest, l)))

    def b5(l):
        def go():
            result = subtract(hadamard_family(forest, l),
                              hadamard_family(forest, l))
            if result is not forest.zero_diagram(l):
                raise ValueError("H - H is not the zero diagram")
            return result
        return go

    units = []
    for l in params:
        units.append(("B1", l, instance, b1(l)))
        if l >= 2:
            units.append(("B2", l, instance, b2(l)))
        units.append(("B3", l, instance, b3(l)))
        units.append(("B4", l, instance, b4(l)))
        units.append(("B5", l, instance, b5(l)))
    return units


def _separation_units(params):
    rational = Forest(field_by_name("rational"))
    floating = Forest(field_by_name("float"))
    units = []
    for l in params:
        units.append(("EXP", l, "rational",
                      (lambda ll: lambda: exp_family(rational, 1 << ll))(l)))
    for l in params:
        if l < 1:
            continue
        units.append(("H", l, "float",
                      (lambda ll: lambda: hadamard_family(floating, ll))(l)))
    return units


def _quantum_units(params, seed):
    rng = random.Random(seed)

    def run_ghz(n):
        return lambda: run_circuit(ghz(n)).diagram

    def run_hidden(builder, n):
        hidden = "".join(rng.choice("01") for _ in range(n))
        if hidden == "0" * n:
            hidden = "1" + hidden[1:]

        def go():
            state = run_circuit(builder(n, hidden))
            outcome = next(iter(measure(state, 1, seed)))[:n]
            if builder is bernstein_vazirani and outcome != hidden:
                raise ValueError(f"measured {outcome}, hidden {hidden}")
            if builder is deutsch_jozsa and outcome == "0" * n:
                raise ValueError("balanced oracle measured as constant")
            return state.diagram
        return go

    def run_qft(n):
        basis = rng.randrange(1 << n)
        return lambda: run_circuit(qft(n, basis)).diagram

    makers = {"GHZ": run_ghz, "QFT": run_qft,
              "BV": lambda n: run_hidden(bernstein_vazirani, n),
              "DJ": lambda n: run_hidden(deutsch_jozsa, n)}
    units = []
    for bench in ("GHZ", "BV", "DJ", "QFT"):
        for n in (params or _QUANTUM_DEFAULTS[bench]):
            if n > _QUANTUM_CAPS[bench]:
                print(f"{bench} n={n} exceeds the desk-scale cap "
                      f"{_QUANTUM_CAPS[bench]}, skipping", file=sys.stderr)
                continue
            units.append((bench, n, "complex", makers[bench](n)))
    return units


def cmd_bench(args):
    if args.suite == "synthetic":
        params = args.params or list(range(1, 7))
        units = _synthetic_units(params, args.instance or "float")
    elif args.suite == "separation":
        params = args.params or list(range(0, 11))
        units = _separation_units(params)
    else:
        units = _quantum_units(args.params, args.seed)
    rows = _run_units(args.suite, units, args.timeout)
    _report_rows(rows, args.format, args.out)
    return 0


# -- the small commands -------------------------------------------------------


def cmd_eval(args):
    d, forest = _resolve(args.input, args.instance)
    bits = args.bits.strip()
    if set(bits) - {"0", "1"}:
        raise ValueError("assignment must be a 0/1 string")
    if len(bits) != 1 << d.level:
        raise ValueError(f"diagram reads {1 << d.level} variables, "
                         f"got {len(bits)} bits")
    value = evaluate(d, [int(b) for b in bits])
    print(forest.field.format_rounded(value))
    return 0


def cmd_validate(args):
    d, _forest = _resolve(args.input, args.instance)
    violations = validate(d)
    for v in violations:
        print(v)
    if not violations:
        print("ok")
    return 0 if not violations else 1


def cmd_export(args):
    d, _forest = _resolve(args.input, args.instance)
    text = dump_diagram(d) if args.dump else export_dot(d)
    _write(text, args.out)
    return 0


def cmd_run(args):
    with open(args.circuit, "r", encoding="utf-8") as fh:
        text = fh.read()
    circuit = parse_circuit(text, args.qubits)
    if args.echo:
        for gate in circuit.gates:
            print(" ".join(str(x) for x in gate), file=sys.stderr)
    state = run_circuit(circuit)
    counts = measure(state, args.shots, args.seed)
    payload = {
        "qubits": circuit.n,
        "shots": args.shots,
        "seed": args.seed,
        "counts": {k: counts[k] for k in sorted(counts)},
    }
    _write(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_op(args):
    d1, forest = _resolve(args.a, args.instance)
    d2, _ = _resolve(args.b, args.instance, forest)
    ops = {"mul": multiply, "add": add,
           "kron": kronecker, "matmul": matrix_multiply}
    result = ops[args.kind](d1, d2)
    _write(dump_diagram(result), args.out)
    return 0


def cmd_sample(args):
    d, _forest = _resolve(args.input, args.instance)
    if args.measure:
        d = measure_view(d)
    ctx = SampleContext(args.seed)
    lines = [sample_assignment(d, ctx) for _ in range(args.count)]
    _write("\n".join(lines) + "\n", args.out)
    return 0


# -- argument wiring ----------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="wcflobdd",
        description="Weighted hierarchical decision diagrams: benchmarks "
                    "and diagram tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=True, out=True):
        if instance:
            p.add_argument("--instance",
                           choices=("rational", "float", "complex"),
                           default=None,
                           help="scalar domain for family inputs")
        if out:
            p.add_argument("--out", default=None, metavar="FILE",
                           help="write output here instead of stdout")

    p = sub.add_parser("bench", help="run a benchmark suite")
    p.add_argument("suite", choices=("synthetic", "separation", "quantum"))
    p.add_argument("--params", type=lambda s: [int(x) for x in s.split(",")],
                   default=None, metavar="N,N,...",
                   help="levels (synthetic/separation) or qubit counts "
                        "(quantum; caps GHZ 4096, BV/DJ 256, QFT 16)")
    p.add_argument("--timeout", type=float, default=900.0,
                   help="per-benchmark budget in seconds (cooperative)")
    p.add_argument("--seed", type=int, default=0,
                   help="hidden-string seed for the quantum suite")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    common(p)
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("eval", help="evaluate a diagram on an assignment")
    p.add_argument("input", help="dump file or family name")
    p.add_argument("bits", help="assignment as a 0/1 string")
    common(p, out=False)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("validate", help="check structural invariants")
    p.add_argument("input")
    common(p, out=False)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("export", help="emit DOT (or a dump with --dump)")
    p.add_argument("input")
    p.add_argument("--dump", action="store_true",
                   help="emit the textual dump instead of DOT")
    common(p)
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("run", help="run a circuit file and sample it")
    p.add_argument("circuit")
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--qubits", type=int, default=None,
                   help="override the inferred qubit count")
    p.add_argument("--echo", action="store_true",
                   help="echo the parsed gates to stderr")
    common(p, instance=False)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("op", help="apply a binary operation to two diagrams")
    p.add_argument("kind", choices=("mul", "add", "kron", "matmul"))
    p.add_argument("a")
    p.add_argument("b")
    common(p)
    p.set_defaults(fn=cmd_op)

    p = sub.add_parser("sample", help="sample assignments from a diagram")
    p.add_argument("input")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--measure", action="store_true",
                   help="sample from squared magnitudes (measure_view)")
    common(p)
    p.set_defaults(fn=cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OverflowError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
