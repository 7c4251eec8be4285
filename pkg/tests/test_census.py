"""Orchestration-level checks: strict config parsing, the census sweep's
determinism across worker counts and interruptions, the sweep reports, and
the command-line exit contract."""

from fractions import Fraction

import pytest

from elltwists.census import (ConfigError, CurveConfig, E37B_CONFIG,
                              TheoryViolation, run_census,
                              run_congruence_sweep, run_e37b, run_family)
from elltwists.cli import main

GOOD_37B = """\
label = 37b
a_invariants = 0, 1, 1, -3, 1
conductor = 37
root_number = 1
precision_digits = 50
"""


class TestCurveConfig:
    def test_round_trip_with_comments_and_blanks(self):
        text = "# header\n\n" + GOOD_37B.replace("conductor = 37",
                                                 "conductor = 37  # level")
        config = CurveConfig.from_text(text)
        assert config == E37B_CONFIG
        assert config.curve().conductor == 37

    def test_nonintegral_model_with_conductor_rejected(self):
        # the Fourier machinery needs an integral model, so a conductor
        # attached to fractional invariants is a configuration error
        text = GOOD_37B.replace("0, 1, 1, -3, 1", "0, 1, 1, -3/2, 1")
        with pytest.raises(ConfigError, match="integral"):
            CurveConfig.from_text(text)

    @pytest.mark.parametrize("mutate,reason", [
        (lambda t: t + "label = again\n", "duplicate key"),
        (lambda t: t.replace("conductor", "conduktor"), "unknown key"),
        (lambda t: t.replace("root_number = 1\n", ""), "missing key"),
        (lambda t: t.replace("0, 1, 1, -3, 1", "0, 1, 1"), "wrong arity"),
        (lambda t: t.replace("= 37", "= 37.5"), "non-integer conductor"),
        (lambda t: t.replace("root_number = 1", "root_number = 3"),
         "invalid sign"),
        (lambda t: t.replace("-3", "x"), "non-numeric"),
        (lambda t: t.replace("label = 37b", "label 37b"), "no separator"),
    ])
    def test_malformed_rejected(self, mutate, reason):
        with pytest.raises(ConfigError):
            CurveConfig.from_text(mutate(GOOD_37B))

    def test_singular_curve_rejected(self):
        with pytest.raises(ConfigError):
            CurveConfig("x", (0, 0, 0, 0, 0), 37, 1)

    def test_wrong_root_number_caught_by_validation(self):
        config = CurveConfig.from_text(
            GOOD_37B.replace("root_number = 1", "root_number = -1"))
        with pytest.raises(ConfigError, match="inconsistent"):
            config.validated_curve()

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            CurveConfig.from_file(tmp_path / "absent.cfg")


class TestRunCensus:
    def test_single_orbit_example(self):
        summary = run_census(E37B_CONFIG, 3, 7)
        assert len(summary.rows) == 1
        row = summary.rows[0]
        assert (row.conductor, row.decision) == (7, "vanishes")
        assert row.coset_sums == (-2, -2, -2)

    def test_counts_monotone_and_complete(self):
        summary = run_census(E37B_CONFIG, 3, 63)
        assert [r.conductor for r in summary.rows] == \
            sorted(r.conductor for r in summary.rows)
        counts = [n for _, n in summary.counts]
        assert counts == sorted(counts)
        assert summary.n_undecided == 0
        assert {r.conductor for r in summary.rows} == {7, 9, 13, 19, 31, 43,
                                                       61, 63}

    def test_level_conductors_skipped_not_dropped(self):
        summary = run_census(E37B_CONFIG, 3, 37)
        assert summary.skipped_conductors == (37,)
        assert all(r.conductor != 37 for r in summary.rows)

    def test_worker_count_does_not_change_bytes(self, tmp_path):
        one = tmp_path / "one.csv"
        two = tmp_path / "two.csv"
        run_census(E37B_CONFIG, 3, 13, workers=1, out=one)
        run_census(E37B_CONFIG, 3, 13, workers=2, out=two)
        assert one.read_bytes() == two.read_bytes()

    def test_resume_reproduces_uninterrupted_run(self, tmp_path):
        full = tmp_path / "full.csv"
        run_census(E37B_CONFIG, 3, 13, out=full)
        reference = full.read_bytes()

        # simulate an interruption by dropping all but the first journal line
        broken = tmp_path / "broken.csv"
        run_census(E37B_CONFIG, 3, 13, out=broken)
        journal = tmp_path / "broken.csv.log"
        first_line = journal.read_text().splitlines()[0]
        journal.write_text(first_line + "\n")
        broken.unlink()

        summary = run_census(E37B_CONFIG, 3, 13, out=broken, resume=True)
        assert summary.resumed == 1 and summary.computed == 2
        assert broken.read_bytes() == reference

    def test_resume_with_complete_journal_recomputes_nothing(self, tmp_path):
        out = tmp_path / "c.csv"
        run_census(E37B_CONFIG, 3, 13, out=out)
        summary = run_census(E37B_CONFIG, 3, 13, out=out, resume=True)
        assert summary.computed == 0
        assert summary.resumed == 3

    def test_torn_journal_line_ignored(self, tmp_path):
        out = tmp_path / "t.csv"
        run_census(E37B_CONFIG, 3, 13, out=out)
        journal = tmp_path / "t.csv.log"
        lines = journal.read_text().splitlines()
        journal.write_text("\n".join(lines[:2]) + '\n{"conductor": 13, "cha')
        summary = run_census(E37B_CONFIG, 3, 13, out=out, resume=True)
        assert summary.resumed == 2 and summary.computed == 1

    def test_resume_without_path_rejected(self):
        with pytest.raises(ConfigError):
            run_census(E37B_CONFIG, 3, 13, resume=True)

    def test_csv_shape(self, tmp_path):
        out = tmp_path / "s.csv"
        run_census(E37B_CONFIG, 3, 13, out=out)
        lines = out.read_text().splitlines()
        assert lines[0] == ("conductor, character, decision, L_re, L_im, "
                            "error_bound, coset_sums")
        assert len(lines) == 4
        first = [part.strip() for part in lines[1].split(",", 3)]
        assert first[0] == "7" and first[1].startswith("(7")


class TestCongruenceSweep:
    def test_small_sweep_all_hold(self):
        report = run_congruence_sweep(E37B_CONFIG, 3, 63)
        assert report.holds_all
        pairs = {(("1" if r.chi is None else r.chi.label()), r.psi.label())
                 for r in report.results}
        # trivial character against the wild conductor must be present
        assert ("1", "(9; 3:1)") in pairs
        assert ("(7; 7:1)", "(9; 3:1)") in pairs
        assert ("(9; 3:1)", "(7; 7:1)") in pairs

    def test_failure_dumps_intermediates(self):
        report = run_congruence_sweep(E37B_CONFIG, 3, 13)
        text = report.text()
        assert "failures: 0" in text


class TestE37bSurvey:
    def test_small_survey(self):
        report = run_e37b(2000, height_bound=8, sample_size=3)
        assert report.n_conductors == 8
        assert report.counts == ((2000, 8),)
        assert [s.conductor for s in report.samples] == [7, 13, 63]
        assert all(s.decision == "vanishes" for s in report.samples)

    def test_default_height_bound_covers_the_range(self):
        from elltwists.census import default_height_bound
        assert default_height_bound(10 ** 7) == 42
        assert default_height_bound(10) == 8


class TestFamilyReports:
    def test_six_torsion_report(self):
        report = run_family("six-torsion", [1, 0, Fraction(-1, 2)])
        by_param = {e.parameter: e for e in report.entries}
        assert by_param[Fraction(0)].excluded is not None
        assert by_param[Fraction(1)].fiber.infinite_order
        assert by_param[Fraction(-1, 2)].fiber.nodal
        # the base surface over lambda = 1 hits the conductor-9 cubic field
        assert any(c[2] == 9 for c in by_param[Fraction(1)].field_cubics)

    def test_four_two_report(self):
        report = run_family("four-two-torsion", [2, 1])
        by_param = {e.parameter: e for e in report.entries}
        assert by_param[Fraction(1)].excluded is not None
        fiber = by_param[Fraction(2)].fiber
        assert fiber.point == (Fraction(249), Fraction(4077))
        assert fiber.infinite_order

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            run_family("five-torsion", [1])


class TestCommandLine:
    def test_census_exit_zero(self, tmp_path, capsys):
        out = tmp_path / "cli.csv"
        code = main(["census", "--curve", "curves/37b.cfg",
                     "--max-conductor", "13", "--out", str(out)])
        assert code == 0
        assert "vanishing orbits" in capsys.readouterr().out
        assert out.exists()

    def test_twist_value_prints_decision(self, capsys):
        code = main(["twist-value", "--curve", "curves/37b.cfg", "7"])
        assert code == 0
        assert "decision: vanishes" in capsys.readouterr().out

    def test_bad_config_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text(GOOD_37B.replace("root_number = 1",
                                        "root_number = -1"))
        code = main(["census", "--curve", str(bad), "--max-conductor", "13"])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_usage_error_exits_one(self, capsys):
        assert main(["census", "--curve", "curves/37b.cfg"]) == 1
        assert main(["no-such-command"]) == 1

    def test_inadmissible_orbit_request_exits_one(self, capsys):
        code = main(["twist-value", "--curve", "curves/37b.cfg", "8"])
        assert code == 1

    def test_family_and_report_round_trip(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        main(["census", "--curve", "curves/37b.cfg",
              "--max-conductor", "13", "--out", str(out)])
        capsys.readouterr()
        code = main(["report", str(out) + ".log", "--out",
                     str(tmp_path / "again.csv")])
        assert code == 0
        assert (tmp_path / "again.csv").read_bytes() == out.read_bytes()

    def test_theory_violation_exits_two(self, monkeypatch, capsys):
        import elltwists.cli as cli

        def boom(*args, **kwargs):
            raise TheoryViolation("sampled twist refused to vanish")

        monkeypatch.setattr(cli, "run_e37b", boom)
        code = main(["e37b", "--max-conductor", "2000"])
        assert code == 2
        assert "theory violation" in capsys.readouterr().err
