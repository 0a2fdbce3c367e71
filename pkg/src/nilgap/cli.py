"""``nilgap`` command line: analyze, walk, nil, examples.

Exit codes: 0 success (Unknown verdicts included), 2 input error, 3 internal
invariant violation. ``NILGAP_THREADS`` caps BLAS threads; all reductions
run in index order, so reports are byte-identical for a given file and seed.
"""

from __future__ import annotations

import os

_threads = os.environ.get("NILGAP_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

import argparse  # noqa: E402
import sys  # noqa: E402
import time  # noqa: E402
from contextlib import contextmanager  # noqa: E402

from . import __version__  # noqa: E402
from .io import SpecError, SpecFile, dumps, load, spec_to_json, torus_to_json  # noqa: E402

MAX_BALL_POINTS = 5_000_000
NIL_SUBCOMMANDS = ("orbits", "stab", "meta", "nevo", "decay")


class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.phases: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str):
        t0 = time.perf_counter()
        yield
        self.phases[name] = round(time.perf_counter() - t0, 6)

    def attach(self, report: dict) -> dict:
        if self.enabled:
            report["timing_seconds"] = self.phases
        return report


def _header(command: str, sf: SpecFile, seed: int | None) -> dict:
    return {"tool": "nilgap", "version": __version__, "command": command, "seed": seed, "input": spec_to_json(sf)}


def _need(sf: SpecFile, kinds: tuple[str, ...], what: str) -> None:
    if sf.kind not in kinds:
        raise SpecError("kind", f"{what} needs kind {' or '.join(kinds)}, file has {sf.kind!r}")


def cmd_analyze(sf: SpecFile, clock: _Clock) -> dict:
    from .torus.ergodic import ergodicity_check
    from .torus.verdict import Budgets, spectral_gap_verdict

    _need(sf, ("torus",), "analyze")
    b = sf.budgets
    budgets = Budgets(depth=b["depth"], ball=b["ball"], effort=b["effort"], seed=b["seed"])
    report = _header("analyze", sf, b["seed"])
    with clock.phase("verdict"):
        report["verdict"] = spectral_gap_verdict(sf.torus, budgets).to_json()
    with clock.phase("ergodicity"):
        report["ergodicity"] = ergodicity_check(sf.torus).to_json()
    return clock.attach(report)


def cmd_walk(sf: SpecFile, clock: _Clock, radii: list[int] | None, iters: int | None) -> dict:
    from .walk import Measure, herz_check, norm_trend

    _need(sf, ("torus",), "walk")
    b = sf.budgets
    radii = radii or b["radius"]
    iters = iters or b["iterations"]
    if any(r < 1 for r in radii):
        raise SpecError("--radius", "radii must be at least 1")
    if iters < 1:
        raise SpecError("--iters", "iterations must be at least 1")
    spec = sf.torus
    for r in radii:
        if (2 * r + 1) ** spec.dim > MAX_BALL_POINTS:
            raise SpecError("budgets.radius", f"radius {r} in dimension {spec.dim} exceeds {MAX_BALL_POINTS} ball points")
    mu = sf.measure or Measure.from_spec(spec)
    report = _header("walk", sf, b["seed"])
    report["measure"] = mu.to_json()
    with clock.phase("norms"):
        report["norm_estimates"] = [e.to_json() for e in norm_trend(spec, mu, radii, iters, seed=b["seed"])]
    if not spec.is_automorphism_group:
        with clock.phase("herz"):
            report["herz_check"] = herz_check(spec, mu, b["herz_radius"], iters, seed=b["seed"])
    return clock.attach(report)


def _default_st_measure():
    from .walk import Measure

    return Measure.uniform([(1,), (-1,), (2,), (-2,)])


def cmd_nil(sf: SpecFile, clock: _Clock, sub: str) -> dict:
    b = sf.budgets
    report = _header(f"nil {sub}", sf, b.get("seed"))
    if sub in ("orbits", "stab"):
        from .nilpotent.n32 import brute_force_rational, coadjoint_orbit, orbit_is_rational, orbit_stabilizer_ball

        _need(sf, ("n32",), f"nil {sub}")
        records = []
        with clock.phase(sub):
            for x0, y0 in sf.orbits:
                o = coadjoint_orbit(x0, y0)
                rec = {"orbit": o.to_json()}
                if sub == "orbits":
                    if o.singleton:
                        rec["rational"] = all(c.denominator == 1 for c in x0)
                    else:
                        cert = orbit_is_rational(o)
                        rec["rationality"] = cert.to_json()
                        rec["brute_force_agrees"] = brute_force_rational(o, b["scan_bound"]) == cert.rational
                elif o.singleton:
                    rec["stabilizer"] = None
                    rec["note"] = "singleton orbit"
                else:
                    rec["stabilizer"] = orbit_stabilizer_ball(sf.n32_generators, o, b["ball"]).to_json()
                records.append(rec)
        report["orbits"] = records
        return clock.attach(report)

    from .nilpotent.metaplectic import NonHyperbolicWord, component_norm_estimate, decay_profile, nevo_check

    _need(sf, ("heisenberg",), f"nil {sub}")
    mu = sf.measure or _default_st_measure()
    with clock.phase(sub):
        if sub == "meta":
            est = component_norm_estimate(mu, b["truncation"], b["iterations"], seed=b["seed"])
            report["measure"] = mu.to_json()
            report["norm_estimates"] = [e.to_json() for e in est]
        elif sub == "nevo":
            report["measure"] = mu.to_json()
            try:
                report["nevo"] = nevo_check(mu, b["nevo_truncation"])
            except ValueError as exc:
                raise SpecError("budgets.nevo_truncation", str(exc)) from None
        else:
            word = sf.word or (2, 2, 2, 1)
            try:
                report["decay"] = decay_profile(word, max(b["truncation"]), b["n_max"])
            except NonHyperbolicWord as exc:
                report["decay"] = {"rejected": "non-hyperbolic", "reason": str(exc)}
    return clock.attach(report)


def example_documents() -> dict[str, dict]:
    from .constructions import curated_examples

    docs = {}
    for ex in curated_examples():
        doc = torus_to_json(ex.spec)
        doc["expected"] = ex.expected
        doc["description"] = ex.description
        docs[ex.name] = doc
    docs["heisenberg_ST"] = {
        "version": "1",
        "kind": "heisenberg",
        "name": "heisenberg_ST",
        "description": "uniform measure on S, S^-1, T, T^-1 in the metaplectic representation; decay word TTTS",
        "measure": {"atoms": [{"word": [s], "weight": "1/4"} for s in (1, -1, 2, -2)]},
        "word": [2, 2, 2, 1],
        "budgets": {"truncation": [64, 128, 256], "nevo_truncation": 32, "n_max": 20, "iterations": 2000, "seed": 0},
    }
    docs["n32_basic"] = {
        "version": "1",
        "kind": "n32",
        "name": "n32_basic",
        "description": "coadjoint orbits of N_{3,2} under a 3-cycle and an elementary matrix",
        "generators": [[["0", "0", "1"], ["1", "0", "0"], ["0", "1", "0"]], [["1", "1", "0"], ["0", "1", "0"], ["0", "0", "1"]]],
        "orbits": [
            {"x0": ["0", "0", "0"], "y0": ["1", "0", "0"]},
            {"x0": ["1", "0", "0"], "y0": ["1", "0", "0"]},
            {"x0": ["1/3", "1/3", "0"], "y0": ["1", "1", "0"]},
            {"x0": ["1", "2", "3"], "y0": ["0", "0", "0"]},
        ],
        "budgets": {"ball": 3, "scan_bound": 10},
    }
    return docs


def cmd_examples(name: str | None) -> str:
    docs = example_documents()
    if name is None:
        lines = []
        for key, doc in docs.items():
            tag = doc.get("expected", doc["kind"])
            lines.append(f"{key:22s} {tag:10s} {doc.get('description', '')}")
        return "\n".join(lines) + "\n"
    if name not in docs:
        raise SpecError("examples", f"unknown example {name!r} (known: {', '.join(docs)})")
    doc = dict(docs[name])
    for k in ("expected", "description"):
        doc.pop(k, None)
    return dumps(doc)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilgap", description="Spectral gap analysis for affine actions on tori and nilmanifolds.")
    p.add_argument("--version", action="version", version=f"nilgap {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(q):
        q.add_argument("file", help="spec file (JSON)")
        q.add_argument("-o", "--output", help="write the report here instead of stdout")
        q.add_argument("--seed", type=int, help="override budgets.seed")
        q.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-identity)")

    a = sub.add_parser("analyze", help="spectral gap verdict and ergodicity report for a torus spec")
    common(a)
    w = sub.add_parser("walk", help="truncated Koopman norm estimates for a torus spec")
    common(w)
    w.add_argument("--radius", type=int, nargs="+", help="ball radii (default: budgets.radius)")
    w.add_argument("--iters", type=int, help="power iterations (default: budgets.iterations)")
    n = sub.add_parser("nil", help="nilmanifold checks: orbits, stab (n32); meta, nevo, decay (heisenberg)")
    common(n)
    n.add_argument("sub", choices=NIL_SUBCOMMANDS)
    e = sub.add_parser("examples", help="list built-in examples, or print one as a spec file")
    e.add_argument("name", nargs="?")
    return p


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "examples":
            _emit(cmd_examples(args.name), None)
            return 0
        sf = load(args.file)
        if args.seed is not None:
            if args.seed < 0:
                raise SpecError("--seed", "must be nonnegative")
            if "seed" in sf.budgets:
                sf.budgets["seed"] = args.seed
        clock = _Clock(args.timing)
        if args.command == "analyze":
            report = cmd_analyze(sf, clock)
        elif args.command == "walk":
            report = cmd_walk(sf, clock, args.radius, args.iters)
        else:
            report = cmd_nil(sf, clock, args.sub)
        _emit(dumps(report), args.output)
        return 0
    except SpecError as exc:
        print(f"nilgap: input error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"nilgap: internal invariant violated: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
