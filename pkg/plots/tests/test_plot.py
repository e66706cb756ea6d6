import os

import pytest

from plots.plot import (
    SchemaError,
    main,
    plot_bias_variance,
    plot_convergence_loglog,
    plot_trajectory,
    read_csv,
)

SAMPLES = os.path.join(os.path.dirname(__file__), "..", "samples")


def sample(name):
    return os.path.join(SAMPLES, name)


class TestConvergenceLoglog:
    def test_single_curve(self, tmp_path):
        out = str(tmp_path / "fig.png")
        plot_convergence_loglog([sample("gradient_aggregate.csv")], out)
        assert os.path.getsize(out) > 0

    def test_overlay_two_learners(self, tmp_path):
        out = str(tmp_path / "fig.png")
        plot_convergence_loglog(
            [sample("gradient_aggregate.csv"), sample("erm_aggregate.csv")], out
        )
        assert os.path.getsize(out) > 0

    def test_other_metric(self, tmp_path):
        out = str(tmp_path / "fig.png")
        plot_convergence_loglog([sample("gradient_aggregate.csv")], out,
                                metric="expected_gap")
        assert os.path.getsize(out) > 0

    def test_unknown_metric(self, tmp_path):
        with pytest.raises(SchemaError):
            plot_convergence_loglog([sample("gradient_aggregate.csv")],
                                    str(tmp_path / "fig.png"), metric="nope")


class TestTrajectory:
    def test_three_phase_with_reference_lines(self, tmp_path):
        out = str(tmp_path / "fig.png")
        plot_trajectory([sample("tracking_trajectories.csv")], out,
                        refs=[0.2, 0.714, 0.5])
        assert os.path.getsize(out) > 0

    def test_single_input_only(self, tmp_path):
        with pytest.raises(SchemaError):
            plot_trajectory([sample("tracking_trajectories.csv")] * 2,
                            str(tmp_path / "fig.png"))


class TestBiasVariance:
    def test_distinct_argmax_markers(self, tmp_path):
        out = str(tmp_path / "fig.png")
        path, r_star, r_k_star = plot_bias_variance([sample("revenue_curves.csv")], out)
        assert os.path.getsize(path) > 0
        distinct = abs(r_star - r_k_star) > 0.005
        status = "PASS" if distinct else "FAIL"
        print(f"[{status}] figure regeneration: raw argmax {r_star:.3f} vs "
              f"smoothed argmax {r_k_star:.3f} marked distinctly")
        assert distinct
        # true optimum of the sampled distribution is 1/1.4
        assert r_star == pytest.approx(1 / 1.4, abs=0.01)


class TestSchemaValidation:
    def test_missing_file(self, tmp_path):
        with pytest.raises(SchemaError):
            read_csv(str(tmp_path / "nope.csv"), ["a", "b"])

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(SchemaError):
            read_csv(str(p), ["a", "b"])

    def test_header_only(self, tmp_path):
        p = tmp_path / "bare.csv"
        p.write_text("a,b\n")
        with pytest.raises(SchemaError):
            read_csv(str(p), ["a", "b"])

    def test_wrong_header(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("x,y\n1,2\n")
        with pytest.raises(SchemaError):
            read_csv(str(p), ["a", "b"])


class TestDeterminism:
    def test_identical_bytes_for_identical_input(self, tmp_path):
        a, b = str(tmp_path / "a.png"), str(tmp_path / "b.png")
        plot_bias_variance([sample("revenue_curves.csv")], a)
        plot_bias_variance([sample("revenue_curves.csv")], b)
        with open(a, "rb") as fa, open(b, "rb") as fb:
            assert fa.read() == fb.read()


class TestCli:
    def test_all_kinds(self, tmp_path):
        cases = [
            (["--kind", "convergence_loglog", "--in", sample("gradient_aggregate.csv"),
              "--in", sample("erm_aggregate.csv")], "conv.png"),
            (["--kind", "trajectory", "--in", sample("tracking_trajectories.csv"),
              "--ref", "0.2", "--ref", "0.714", "--ref", "0.5"], "traj.png"),
            (["--kind", "bias_variance", "--in", sample("revenue_curves.csv")], "bv.png"),
        ]
        for argv, name in cases:
            out = str(tmp_path / name)
            assert main(argv + ["--out", out]) == 0
            assert os.path.getsize(out) > 0

    def test_schema_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x\n1\n")
        rc = main(["--kind", "trajectory", "--in", str(bad),
                   "--out", str(tmp_path / "fig.png")])
        assert rc == 1
