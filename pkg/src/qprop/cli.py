"""Command-line front end: eval, demo, diagram and check commands.

Exit codes: 0 on success (a truth-value gap is a result, not an error),
1 on validation errors, 2 on I/O errors. Tolerance precedence: scenario
eps field, then --eps, then the QPROP_EPS environment variable, then the
built-in default.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from .composition import induced_bivalence
from .errors import QpropError
from .hasse import DiagramOptions, annotate, build_graph, emit_dot, merge_graphs
from .lattices import (
    check_distributivity,
    collection_of,
    lattice_of,
    paste_sublattice,
)
from .scenario import Scenario, check_scenario, parse_scenario
from .subspaces import (
    commutator,
    contains_vector,
    meet,
    projector_of,
    subspaces_commute,
)
from .valuation import (
    Proposition,
    TruthValue,
    evaluate_disjunction_with_negation,
    truth_table,
)

DEMO_SCENARIOS = {
    "intro": "intro_qubit.json",
    "environment": "env_two_qubit.json",
    "classical-limit": "classical_limit.json",
}


def _bundled_text(filename: str) -> str:
    return resources.files("qprop").joinpath("scenarios", filename).read_text("utf-8")


def _cli_eps(args) -> float | None:
    if args.eps is not None:
        return args.eps
    env = os.environ.get("QPROP_EPS")
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise QpropError(f"QPROP_EPS is not a number: {env!r}") from exc
    return None


def _load(path: str) -> tuple[str, str]:
    """Read a scenario file; returns (name, text)."""
    p = Path(path)
    return p.stem, p.read_text("utf-8")


def _fmt_eps(eps: float) -> str:
    return repr(eps)


def _rows_json(rows) -> list[dict]:
    return [
        {
            "name": name,
            "value": value.json_value,
            "status": value.value,
            "rendered": value.rendered,
        }
        for name, value in rows
    ]


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def run_eval(name: str, text: str, eps_override: float | None, as_json: bool) -> str:
    sc = parse_scenario(text)
    eps = sc.effective_eps(eps_override)
    inp = sc.valuation_input(eps)  # rejects scenarios without an evaluation block
    props = [sc.propositions[n] for n in sc.evaluation.propositions]
    rows = truth_table(inp, props, eps)
    if as_json:
        report = {
            "report": "eval",
            "scenario": name,
            "dimension": sc.dimension,
            "eps": eps,
            "state": sc.evaluation.state,
            "rows": _rows_json(rows),
        }
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    lines = [
        f"scenario: {name} (dimension {sc.dimension}, eps {_fmt_eps(eps)})",
        f"state: {sc.evaluation.state}",
    ]
    lines += [f"{name_}: {value.rendered}" for name_, value in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# demos
# ---------------------------------------------------------------------------


def _demo_intro(eps_override: float | None, as_json: bool) -> str:
    name = "intro_qubit"
    sc = parse_scenario(_bundled_text(DEMO_SCENARIOS["intro"]))
    eps = sc.effective_eps(eps_override)
    inp = sc.valuation_input(eps)
    props = [sc.propositions[n] for n in sc.evaluation.propositions]
    rows = truth_table(inp, props, eps)
    disj = evaluate_disjunction_with_negation(inp, sc.propositions["P_x+"], eps)

    pasted = paste_sublattice(sc.collection(eps), eps)
    a = sc.propositions["P_z+"].subspace
    b = sc.propositions["P_x+"].subspace
    c = sc.propositions["P_x-"].subspace
    report = check_distributivity(pasted, a, b, c, eps)
    lhs_true = contains_vector(report.lhs, inp.state, eps)
    rhs_true = contains_vector(report.rhs, inp.state, eps)

    if as_json:
        out = {
            "report": "demo-intro",
            "scenario": name,
            "rows": _rows_json(rows),
            "disjunction": {
                "name": "P_x+ ∨ ¬P_x+",
                "value": disj.json_value,
                "status": disj.value,
                "rendered": disj.rendered,
            },
            "distributivity": {
                "lhs_dim": report.lhs.dim,
                "rhs_dim": report.rhs.dim,
                "lhs_true": bool(lhs_true),
                "rhs_true": bool(rhs_true),
                "equal": report.equal,
            },
        }
        return json.dumps(out, indent=2, ensure_ascii=False) + "\n"

    lines = [
        "== intro demo: one qubit, incompatible spin propositions ==",
        f"scenario: {name} (dimension {sc.dimension}, eps {_fmt_eps(eps)})",
        f"state: {sc.evaluation.state}",
        "truth values:",
    ]
    lines += [f"  {n}: {v.rendered}" for n, v in rows]
    lines.append(f"  P_x+ ∨ ¬P_x+: {disj.rendered}  (true although both disjuncts are gaps)")
    lines += [
        "distributivity of ∧ over ∨ in the pasted sublattice, a=P_z+, b=P_x+, c=P_x-:",
        f"  a ∧ (b ∨ c) has dimension {report.lhs.dim}; contains the state: "
        f"{'yes' if lhs_true else 'no'}",
        f"  (a ∧ b) ∨ (a ∧ c) has dimension {report.rhs.dim}; contains the state: "
        f"{'yes' if rhs_true else 'no'}",
        f"  sides equal: {'yes' if report.equal else 'no -> the distributive law fails'}",
    ]
    return "\n".join(lines) + "\n"


def _demo_environment(eps_override: float | None, as_json: bool) -> str:
    name = "env_two_qubit"
    sc = parse_scenario(_bundled_text(DEMO_SCENARIOS["environment"]))
    eps = sc.effective_eps(eps_override)
    inp = sc.valuation_input(eps)
    props = [sc.propositions[n] for n in sc.evaluation.propositions]
    rows = truth_table(inp, props, eps)
    prop_q = sc.factors["S"].propositions["P_Sx+"]
    env_prop = sc.factors["E1"].propositions["E1z+"]
    report = induced_bivalence(sc, prop_q, env_prop, eps)

    if as_json:
        out = {
            "report": "demo-environment",
            "scenario": name,
            "rows": _rows_json(rows),
            "bivalence": report.to_json(),
        }
        return json.dumps(out, indent=2, ensure_ascii=False) + "\n"

    lines = [
        "== environment demo: qubit plus one environment qubit ==",
        f"scenario: {name} (dimension {sc.dimension}, eps {_fmt_eps(eps)})",
        f"composite state: {sc.evaluation.state}",
        "composite truth values:",
    ]
    lines += [f"  {n}: {v.rendered}" for n, v in rows]
    lines += [
        f"bivalence inference for {report.proposition}:",
        f"  isolated-system value: {report.pre_value.rendered}",
        f"  companion environment proposition {report.companion_env_prop}: "
        f"{report.companion_value.rendered}",
        f"  conjunction {report.proposition} ∧ {report.companion_env_prop}: "
        f"{report.conjunction_value.rendered}",
        f"  witness lattice: {report.witness_lattice}",
        f"  post status: {report.post_status}",
    ]
    return "\n".join(lines) + "\n"


def _demo_classical_limit(eps_override: float | None, as_json: bool) -> str:
    name = "classical_limit"
    sc = parse_scenario(_bundled_text(DEMO_SCENARIOS["classical-limit"]))
    eps = sc.effective_eps(eps_override)
    inp = sc.valuation_input(eps)
    pasted = paste_sublattice(sc.collection(eps), eps)

    labels = []
    for e in pasted.elements:
        label = None
        for pname, prop in sc.propositions.items():
            if prop.subspace.equals(e, eps):
                label = pname
                break
        if label is None:
            label = "{0}" if e.is_zero else ("H" if e.is_full else f"dim-{e.dim}")
        labels.append(label)

    # In the pasted structure every meet exists, so every proposition is
    # decided by plain membership of the state in the meet.
    values = []
    for e, label in zip(pasted.elements, labels):
        m = meet(inp.home, e, eps)
        v = TruthValue.TRUE if contains_vector(m, inp.state, eps) else TruthValue.FALSE
        values.append((label, v))

    n = len(pasted.elements)
    matrix_rows = []
    agree = 0
    within_block_ok = True
    cross_block_fail = True
    for i in range(n):
        row = ""
        for j in range(n):
            lattice_side = subspaces_commute(pasted.elements[i], pasted.elements[j], eps)
            comm = commutator(
                projector_of(pasted.elements[i]), projector_of(pasted.elements[j])
            )
            operator_side = float(abs(comm).max()) <= 1e-8
            if lattice_side == operator_side:
                agree += 1
            row += "1" if lattice_side else "."
            shared = set(pasted.blocks_of(i)) & set(pasted.blocks_of(j))
            trivial = (
                pasted.elements[i].is_zero
                or pasted.elements[i].is_full
                or pasted.elements[j].is_zero
                or pasted.elements[j].is_full
            )
            if shared and not lattice_side:
                within_block_ok = False
            if not shared and not trivial and lattice_side:
                cross_block_fail = False
        matrix_rows.append(row)

    if as_json:
        out = {
            "report": "demo-classical-limit",
            "scenario": name,
            "elements": labels,
            "rows": _rows_json(values),
            "commute_matrix": matrix_rows,
            "pairs_agreeing_with_commutator": agree,
            "total_pairs": n * n,
            "within_block_all_commute": within_block_ok,
            "cross_block_nontrivial_all_fail": cross_block_fail,
        }
        return json.dumps(out, indent=2, ensure_ascii=False) + "\n"

    lines = [
        "== classical-limit demo: pasted sublattice of the z, x, y blocks ==",
        f"scenario: {name} (dimension {sc.dimension}, eps {_fmt_eps(eps)})",
        f"pasted sublattice: {n} elements from blocks "
        + ", ".join(sc.contexts.keys()),
        "inside the pasted structure every meet exists; values in the state:",
    ]
    lines += [f"  {label}: {v.rendered}" for label, v in values]
    lines.append("subspace commutativity (rows/cols in element order; 1 = commute):")
    lines += [f"  {labels[i]:>6} {matrix_rows[i]}" for i in range(n)]
    lines += [
        f"lattice condition agrees with the commutator criterion on {agree}/{n * n} pairs",
        f"within each block all pairs commute: {'yes' if within_block_ok else 'no'}",
        "every cross-block nontrivial pair fails the condition: "
        + ("yes" if cross_block_fail else "no"),
    ]
    return "\n".join(lines) + "\n"


def run_demo(name: str, eps_override: float | None, as_json: bool) -> str:
    if name == "intro":
        return _demo_intro(eps_override, as_json)
    if name == "environment":
        return _demo_environment(eps_override, as_json)
    if name == "classical-limit":
        return _demo_classical_limit(eps_override, as_json)
    raise QpropError(f"unknown demo {name!r}")


# ---------------------------------------------------------------------------
# diagram
# ---------------------------------------------------------------------------


def _lattice_graph(sc: Scenario, label: str, eps: float, include_trivials: bool):
    """Annotated Hasse graph of one context's lattice."""
    lat = lattice_of(sc.contexts[label], eps)
    elements = [
        e
        for e in lat.elements
        if include_trivials or not (e.is_zero or e.is_full)
    ]
    labels = []
    for i, e in enumerate(elements):
        name = None
        for pname, prop in sc.propositions.items():
            if prop.subspace.equals(e, eps):
                name = pname
                break
        labels.append(name)
    graph = build_graph(elements, labels, tol=eps)
    inp = sc.valuation_input(eps)
    props = [Proposition(v.label, elements[i]) for i, v in enumerate(graph.vertices)]
    rows = truth_table(inp, props, eps)
    return annotate(graph, rows)


def run_diagram(
    name: str,
    text: str,
    eps_override: float | None,
    include_trivials: bool,
    cluster_blocks: bool,
) -> str:
    sc = parse_scenario(text)
    eps = sc.effective_eps(eps_override)
    if sc.evaluation is not None and sc.evaluation.context is not None:
        context_labels = [sc.evaluation.context]
    else:
        context_labels = list(sc.contexts.keys())
    if not context_labels:
        raise QpropError("scenario declares no contexts to diagram")

    if cluster_blocks:
        selected = collection_of([sc.contexts[label] for label in context_labels], eps)
        pasted = paste_sublattice(selected, eps)
        elements = [
            e
            for e in pasted.elements
            if include_trivials or not (e.is_zero or e.is_full)
        ]
        index_map = [pasted.index_of(e, eps) for e in elements]
        labels = []
        for e in elements:
            pname = None
            for candidate, prop in sc.propositions.items():
                if prop.subspace.equals(e, eps):
                    pname = candidate
                    break
            labels.append(pname)
        blocks = {
            i: tuple(sorted(pasted.blocks_of(index_map[i])))
            for i in range(len(elements))
        }
        graph = build_graph(elements, labels, blocks, tol=eps)
        inp = sc.valuation_input(eps)
        props = [Proposition(v.label, elements[i]) for i, v in enumerate(graph.vertices)]
        graph = annotate(graph, truth_table(inp, props, eps))
        return emit_dot(
            graph,
            DiagramOptions(cluster_blocks=True, include_trivials=include_trivials,
                           graph_name=name.replace("-", "_")),
        )

    graphs = [
        _lattice_graph(sc, label, eps, include_trivials) for label in context_labels
    ]
    merged = merge_graphs(graphs)
    return emit_dot(
        merged,
        DiagramOptions(include_trivials=include_trivials,
                       graph_name=name.replace("-", "_")),
    )


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def run_check(name: str, text: str, as_json: bool) -> tuple[int, str]:
    rows = check_scenario(text)
    ok = all(r[1] for r in rows)
    if as_json:
        out = {
            "report": "check",
            "scenario": name,
            "ok": ok,
            "objects": [
                {"path": path, "ok": good, "reason": reason}
                for path, good, reason in rows
            ],
        }
        return (0 if ok else 1), json.dumps(out, indent=2, ensure_ascii=False) + "\n"
    lines = [f"scenario: {name}"]
    for path, good, reason in rows:
        lines.append(f"{path}: {'ok' if good else 'FAIL ' + reason}")
    lines.append("result: " + ("all checks passed" if ok else "checks FAILED"))
    return (0 if ok else 1), "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing / dispatch
# ---------------------------------------------------------------------------


def _str2bool(value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qprop",
        description="Supervaluational truth values for quantum propositions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a scenario's propositions")
    p_eval.add_argument("scenario", help="path to a scenario JSON file")
    p_eval.add_argument("--json", action="store_true", help="machine-readable output")
    p_eval.add_argument("--eps", type=float, default=None, help="tolerance override")

    p_demo = sub.add_parser("demo", help="run a bundled demonstration")
    p_demo.add_argument("name", choices=sorted(DEMO_SCENARIOS))
    p_demo.add_argument("--json", action="store_true")
    p_demo.add_argument("--eps", type=float, default=None)

    p_diag = sub.add_parser("diagram", help="emit an annotated Hasse diagram (DOT)")
    p_diag.add_argument("scenario")
    p_diag.add_argument("--out", default=None, help="output path (default stdout)")
    p_diag.add_argument("--eps", type=float, default=None)
    p_diag.add_argument("--include-trivials", type=_str2bool, default=True,
                        metavar="BOOL")
    p_diag.add_argument("--cluster-blocks", action="store_true")

    p_check = sub.add_parser("check", help="validate a scenario without evaluating")
    p_check.add_argument("scenario")
    p_check.add_argument("--json", action="store_true")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "eval":
            name, text = _load(args.scenario)
            sys.stdout.write(run_eval(name, text, _cli_eps(args), args.json))
            return 0
        if args.command == "demo":
            sys.stdout.write(run_demo(args.name, _cli_eps(args), args.json))
            return 0
        if args.command == "diagram":
            name, text = _load(args.scenario)
            dot = run_diagram(
                name, text, _cli_eps(args), args.include_trivials, args.cluster_blocks
            )
            if args.out:
                Path(args.out).write_text(dot, "utf-8")
            else:
                sys.stdout.write(dot)
            return 0
        if args.command == "check":
            name, text = _load(args.scenario)
            code, out = run_check(name, text, args.json)
            sys.stdout.write(out)
            return code
        raise QpropError(f"unknown command {args.command!r}")
    except OSError as exc:
        sys.stderr.write(f"i/o error: {exc}\n")
        return 2
    except (QpropError, ValueError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
