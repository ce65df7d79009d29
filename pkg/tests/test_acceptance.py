"""Acceptance suite: one test per criterion, each printing a pass/fail
line with its runtime and asserting its time budget.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.
"""

import itertools
import json
import random
import time
from contextlib import contextmanager

import gmpy2
import pytest
from gmpy2 import gcd, mpq

import elldep as E
import elldep.cli as cli
from helpers import brute_force_relation, pair_md_literal, pair_md_maximal_rank_literal

_SUITE_T0 = time.perf_counter()
_SUITE_BUDGET = 300.0  # the whole acceptance run must stay under 5 minutes


@contextmanager
def criterion(num, budget, title):
    t0 = time.perf_counter()
    try:
        yield
    except Exception:
        print(f"[criterion {num:2d}] FAIL ({time.perf_counter() - t0:.2f}s) {title}")
        raise
    elapsed = time.perf_counter() - t0
    print(f"[criterion {num:2d}] PASS ({elapsed:.2f}s <= {budget:g}s) {title}")
    assert elapsed <= budget, f"criterion {num} took {elapsed:.2f}s, budget {budget}s"


def test_c01_group_law_and_sequence_exactness(curve, point_p):
    with criterion(1, 1.0, "group law and first denominators, exact"):
        p2 = E.add(curve, point_p, point_p)
        assert p2 == E.PointQ.affine(mpq(129, 100), mpq(-383, 1000))
        window = E.generate(curve, point_p, None, 0, 3)
        assert [int(t.d) for t in window.terms] == [1, 10, 171]
        multiples = [E.INFINITY]
        for _ in range(40):
            multiples.append(E.add(curve, multiples[-1], point_p))
        for m in range(21):
            for n in range(21):
                assert E.add(curve, multiples[m], multiples[n]) == multiples[m + n]


def test_c02_lowest_form_invariants(curve, point_p, window60):
    with criterion(2, 10.0, "lowest-form denominator structure for n <= 60"):
        for t in window60.terms:
            lf = t.lf
            pt = E.PointQ(mpq(lf.aP, lf.dP**2), mpq(lf.bP, lf.dP**3))
            assert E.on_curve(curve, pt)
            assert pt.x.denominator == lf.dP**2  # den(x) is exactly d^2
            assert pt.y.denominator == lf.dP**3  # den(y) is exactly d^3
            assert gcd(lf.aP * lf.bP, lf.dP) == 1
            assert gmpy2.isqrt(pt.x.denominator) ** 2 == pt.x.denominator


def test_c03_appearance_index_cross_validation(curve, point_p, window500):
    with criterion(3, 30.0, "point-order vs direct-scan r_p for good p < 200"):
        from elldep.modp import primes_up_to

        d_p = E.lowest_form(point_p).dP
        checked = 0
        for prime in primes_up_to(199):
            if prime <= 3 or curve.disc % prime == 0 or d_p % prime == 0:
                continue
            by_order = E.appearance_index(curve, point_p, prime)
            assert by_order.method == "order"
            by_scan = next(
                (n for n in range(1, 501) if window500.d(n) % prime == 0), None
            )
            if by_scan is None:
                assert by_order.value > 500
            else:
                assert by_order.value == by_scan, f"p={prime}"
            checked += 1
        assert checked == 44  # good primes below 200 on this curve
        assert E.appearance_index(curve, point_p, 5).value == 2
        assert E.appearance_index(curve, point_p, 19).value == 3


def test_c04_residue_class_structure(curve, point_p, window500):
    with criterion(4, 60.0, "hit residue classes mod r_p over n <= 500"):
        for prime in (5, 19, 7, 11, 13, 17, 23):
            rp = E.appearance_index(curve, point_p, prime).value
            hits = E.count_valuation_hits(
                curve, point_p, None, prime, 0, 500, window=window500
            )
            den_classes = {n % rp for n in hits.denominator_hits}
            num_classes = {n % rp for n in hits.numerator_hits}
            assert len(den_classes) == 1, f"p={prime}: {den_classes}"
            assert len(num_classes) <= 2, f"p={prime}: {num_classes}"
            assert hits.denominator_hits, f"p={prime}: no denominator hits seen"


def test_c05_empirical_zsigmondy(curve, point_p):
    with criterion(5, 60.0, "primitive parts beyond the threshold, n <= 50"):
        threshold = E.zsigmondy_threshold(curve, point_p, 50)
        assert threshold <= 2
        window = E.generate(curve, point_p, None, 0, 50, primitive_parts=True)
        for t in window.terms:
            if t.n > threshold:
                assert t.primitive_part > 1, f"n={t.n} lacks a primitive prime"
        assert E.zsigmondy_threshold(curve, point_p, 60) == threshold


def test_c06_height_consistency(curve, point_p, window60):
    with criterion(6, 30.0, "denominator growth matches the height estimate"):
        est = E.canonical_height(curve, point_p, None, 40)
        for n in range(30, 41):
            per_n = 2.0 * float(gmpy2.log(window60.d(n))) / (n * n)
            assert abs(per_n - est.hhat) <= 0.1 * est.hhat, f"n={n}"
        est2 = E.canonical_height(curve, E.scalar_mul(curve, 2, point_p), None, 40)
        assert 3.6 <= est2.hhat / est.hhat <= 4.4


def test_c07_md_oracle_equivalence():
    with criterion(7, 60.0, "dependence engine vs brute-force exponent scan"):
        rng = random.Random(20250810)
        for _ in range(500):
            s = rng.randint(1, 4)
            values = [rng.choice([1, -1]) * rng.randint(2, 500) for _ in range(s)]
            verdict = E.is_md(values)
            if verdict.dependent:
                out = mpq(1)
                for v, k in zip(values, verdict.relation):
                    out *= mpq(v) ** int(k)
                assert out == 1, f"witness fails to replay for {values}"
            found = brute_force_relation(values, kmax=6)
            if found is not None:
                assert verdict.dependent, f"brute force found {found} for {values}"
        assert E.is_md_maximal_rank([2, 3, 6]).maximal_rank
        assert not E.is_md_maximal_rank([4, 8, 5]).maximal_rank


def test_c08_half_cover_exhaustive():
    with criterion(8, 60.0, "half cover on all graphs with <= 6 vertices"):
        total = 0
        for n_vertices in range(2, 7):
            pairs = list(itertools.combinations(range(n_vertices), 2))
            for mask in range(1 << len(pairs)):
                degree = [0] * n_vertices
                edges = []
                for k, pair in enumerate(pairs):
                    if mask >> k & 1:
                        edges.append(pair)
                        degree[pair[0]] += 1
                        degree[pair[1]] += 1
                if 0 in degree:
                    continue
                g = E.Graph(n_vertices, frozenset(edges))
                cover = E.half_cover(g)  # re-verifies both clauses internally
                assert len(cover.v1) <= n_vertices // 2
                total += 1
        # inclusion-exclusion: 1 + 4 + 41 + 768 + 27449 such graphs exist
        assert total == 28263


def test_c09_counting_two_path_agreement(curve, point_p, window60):
    with criterion(9, 120.0, "box counts vs a from-first-principles recount"):
        n = 20
        d = {k: window60.d(k) for k in range(1, n + 1)}
        spec = lambda target: E.BoxSpec(
            (curve, curve), (point_p, point_p), (E.INFINITY, E.INFINITY), 0, n, target
        )
        res_d = E.count_box(spec("D"))
        res_dstar = E.count_box(spec("D*"))
        expect_d = sum(
            pair_md_literal(d[i], d[j])
            for i in range(1, n + 1)
            for j in range(1, n + 1)
        )
        expect_dstar = sum(
            pair_md_maximal_rank_literal(d[i], d[j])
            for i in range(1, n + 1)
            for j in range(1, n + 1)
        )
        assert res_d.count == expect_d
        assert res_dstar.count == expect_dstar
        # the D <= sum-over-subtuple-sizes inequality, evaluated literally
        dstar_1 = sum(1 for k in range(1, n + 1) if d[k] == 1)
        assert res_d.count <= 2 * dstar_1 * n + res_dstar.count
        # diagonal lower bound
        assert res_d.count >= n
        # every witness of the Q = O count replays to exactly 1
        res_dp = E.count_box(spec("D_P"))
        assert res_dp.count == res_d.count
        for ns, relation in res_dp.witnesses:
            out = mpq(1)
            for k_idx, exponent in zip(ns, relation):
                out *= mpq(d[k_idx]) ** int(exponent)
            assert out == 1


def test_c10_semigroup_bound(curve, point_p):
    with criterion(10, 60.0, "division-semigroup hits within threshold + rank"):
        window = E.generate(curve, point_p, None, 0, 40)
        report = E.zsigmondy_semigroup_count(window, [10, 171])  # d_2, d_3
        assert report.threshold == 1 and report.rank == 2
        assert report.count <= report.bound
        assert report.hits == (1, 2, 3)


def test_c11_exponent_fit_reporting(curve, point_p, tmp_path):
    with criterion(11, 120.0, "count reports: fitted alpha vs predicted exponent"):
        runs = {"D*": 12 / 7, "D_P": 1.0}
        for target, predicted in runs.items():
            prefix = tmp_path / target.replace("*", "star")
            code = cli.main([
                "count", "--curve", "0,-2", "--p", "3,5", "--target", target,
                "--series", "8,12,16,20", "--out-prefix", str(prefix),
            ])
            assert code == 0
            payload = json.loads((tmp_path / f"{prefix.name}.json").read_text())
            assert payload["theoretical"] == pytest.approx(predicted)
            assert payload["alpha"] >= 0
            assert payload["monotone"]
            csv_lines = (tmp_path / f"{prefix.name}.csv").read_text().splitlines()
            assert csv_lines[0] == "N,count,alpha_partial"
            assert len(csv_lines) == 5
            counts = [int(line.split(",")[1]) for line in csv_lines[1:]]
            assert counts == sorted(counts)
    total = time.perf_counter() - _SUITE_T0
    print(f"[acceptance] total wall time {total:.1f}s (budget {_SUITE_BUDGET:g}s)")
    assert total <= _SUITE_BUDGET
