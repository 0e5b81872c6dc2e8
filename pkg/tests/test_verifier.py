"""Check catalog, runner, report determinism, and the CLI."""

import json
from fractions import Fraction

import pytest

from loopstable import cli, kkcat
from loopstable.algebras import FinAlgebra, dual_numbers, format_algebra_file
from loopstable.verifier import (
    ALIASES,
    CATALOG,
    CheckConfig,
    UnknownCheckError,
    resolve_check_ids,
    run_check,
    run_suite,
)


def _cfg(**kw):
    defaults = dict(algebra_name="dual", algebra=dual_numbers(), samples=4)
    defaults.update(kw)
    return CheckConfig(**defaults)


class TestCatalog:
    def test_all_checks_run_clean(self):
        report = run_suite(["all"], _cfg())
        assert len(report.results) == len(CATALOG)
        assert not report.failed
        statuses = {r.check: r.status for r in report.results}
        assert statuses["star-lambda-identities"] in (
            "PASS", "SEARCH-DERIVED", "NOT-FOUND"
        )
        for cid, st in statuses.items():
            if cid != "star-lambda-identities":
                assert st == "PASS", (cid, st)

    def test_catalog_order_preserved(self):
        report = run_suite(["all"], _cfg())
        assert [r.check for r in report.results] == list(CATALOG)

    def test_aliases(self):
        assert resolve_check_ids(["mu-associativity"]) == ["mu-properties-1-4"]
        assert resolve_check_ids(["clascon"]) == ["star-lambda-identities"]

    def test_unknown_id(self):
        with pytest.raises(UnknownCheckError):
            resolve_check_ids(["nope"])
        with pytest.raises(UnknownCheckError):
            run_check("nope", _cfg())

    def test_zero_samples_skip(self):
        report = run_suite(["all"], _cfg(samples=0))
        assert all(r.status == "SKIPPED" for r in report.results)
        assert not report.failed

    def test_parallel_matches_serial(self):
        a = run_suite(["all"], _cfg(), jobs=1)
        b = run_suite(["all"], _cfg(), jobs=4)
        assert a.to_json(include_timing=False) == b.to_json(include_timing=False)


class TestDeterminism:
    def test_json_identical_modulo_timing(self):
        a = run_suite(["all"], _cfg(samples=6, seed=42))
        b = run_suite(["all"], _cfg(samples=6, seed=42))
        assert a.to_json(include_timing=False) == b.to_json(include_timing=False)

    def test_timing_fields_only_difference(self):
        a = run_suite(["tr2-homotopy"], _cfg())
        d = a.to_dict(include_timing=True)
        d2 = a.to_dict(include_timing=False)
        for r in d["results"]:
            r.pop("seconds")
        assert d == d2


class TestFalsification:
    def test_corrupted_structure_constant_detected(self):
        one = Fraction(1)
        corrupt = FinAlgebra(
            "Q[x]/(x^2)", ["1", "x"],
            {("1", "1"): (("1", one),), ("1", "x"): (("x", one),),
             ("x", "1"): (("x", one),), ("x", "x"): (("1", one),)},
            unit=(("1", one),), validate=False,
        )
        r = run_check(
            "lambda-curvature-formula",
            _cfg(algebra=corrupt, algebra_name="dual"),
        )
        assert r.status == "FAIL"
        assert r.counterexample is not None
        assert r.counterexample["check"] == "lambda-curvature-formula"
        assert r.counterexample["algebra"] == "dual"
        assert "seed" in r.counterexample

    def test_nonassociative_corruption_detected(self):
        one = Fraction(1)
        corrupt = FinAlgebra(
            "Q[x]/(x^2)", ["1", "x"],
            {("1", "1"): (("1", one),), ("1", "x"): (("x", one),),
             ("x", "1"): (("1", one),)},  # x·1 broken
            unit=(("1", one),), validate=False,
        )
        r = run_check("tr2-homotopy", _cfg(algebra=corrupt))
        assert r.status == "FAIL" and r.counterexample is not None

    def test_dropped_sign_detected(self, monkeypatch):
        monkeypatch.setattr(kkcat, "crossing_sign", lambda n2, n3: 1)
        r = run_check("star-lambda-identities", _cfg())
        assert r.status == "FAIL"
        assert "sign" in r.counterexample


class TestCLI:
    def test_list(self, capsys):
        assert cli.main(["--list"]) == 0
        out = capsys.readouterr().out
        for cid in CATALOG:
            assert cid in out

    def test_exit_zero_on_pass(self):
        assert cli.main(["--check", "star-unit", "--samples", "4"]) == 0

    def test_exit_two_on_unknown_check(self, capsys):
        assert cli.main(["--check", "bogus"]) == 2
        assert "valid ids" in capsys.readouterr().err

    def test_exit_two_on_bad_algebra(self):
        assert cli.main(["--algebra", "builtin:nope"]) == 2
        assert cli.main(["--algebra", "nocolon"]) == 2
        assert cli.main(["--algebra", "file:/does/not/exist.alg"]) == 2

    def test_exit_one_on_failure(self, monkeypatch):
        monkeypatch.setattr(kkcat, "crossing_sign", lambda n2, n3: 1)
        code = cli.main(
            ["--check", "star-lambda-identities", "--samples", "4"]
        )
        assert code == 1

    def test_json_output(self, capsys):
        assert cli.main(
            ["--check", "lambda-curvature-formula", "--format", "json"]
        ) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["results"][0]["status"] == "PASS"
        assert data["summary"] == {"PASS": 1}

    def test_file_algebra(self, tmp_path, capsys):
        p = tmp_path / "dual.alg"
        p.write_text(format_algebra_file(dual_numbers()))
        code = cli.main(
            ["--algebra", f"file:{p}", "--check", "tr2-homotopy",
             "--samples", "4"]
        )
        assert code == 0

    def test_builtin_algebras_on_a_fast_check(self):
        for name in ("q", "dual", "m2q", "sq0"):
            assert cli.main(
                ["--algebra", f"builtin:{name}",
                 "--check", "lambda-curvature-formula"]
            ) == 0
