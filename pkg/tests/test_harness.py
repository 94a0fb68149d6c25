import numpy as np
import pytest
from click.testing import CliRunner

from paritylab.cli import main, read_config_file
from paritylab.gf2 import BitString
from paritylab.harness import (
    CSV_COLUMNS,
    SEPARATION_COLUMNS,
    ConfigurationError,
    ExperimentConfig,
    empirical_outcome_distribution,
    records_to_csv,
    run_experiment,
    separation_report,
    separation_to_csv,
    tv_distance,
    verify,
)
from paritylab.oracles import (
    Classification,
    Depolarizing,
    Noiseless,
    OutcomeDistribution,
)
from paritylab.plots import plot_separation


class TestTvDistance:
    def test_identical(self):
        d = OutcomeDistribution(1, np.array([0.25, 0.25, 0.25, 0.25]))
        assert tv_distance(d, d) == 0.0

    def test_disjoint_point_masses(self):
        p = OutcomeDistribution(1, np.array([1.0, 0.0, 0.0, 0.0]))
        q = OutcomeDistribution(1, np.array([0.0, 0.0, 0.0, 1.0]))
        assert tv_distance(p, q) == 1.0

    def test_hand_value(self):
        p = OutcomeDistribution(1, np.array([0.5, 0.5, 0.0, 0.0]))
        q = OutcomeDistribution(1, np.array([0.0, 0.5, 0.5, 0.0]))
        assert tv_distance(p, q) == 0.5

    def test_support_mismatch(self):
        p = OutcomeDistribution(1, np.array([0.5, 0.5, 0.0, 0.0]))
        q = OutcomeDistribution(2, np.full(8, 1 / 8))
        with pytest.raises(ValueError):
            tv_distance(p, q)

    def test_empirical_histogram_shape(self):
        m = np.array([[1, 0], [0, 0], [1, 0]], dtype=np.uint8)
        b = np.array([1, 0, 1], dtype=np.uint8)
        d = empirical_outcome_distribution(m, b, 2)
        assert d.prob(BitString.from_text("10"), 1) == pytest.approx(2 / 3)
        assert d.prob(BitString.from_text("00"), 0) == pytest.approx(1 / 3)


class TestConfigValidation:
    def test_valid_pairings(self):
        ExperimentConfig(n=4, noise=Noiseless(), learner="noiseless_classical")
        ExperimentConfig(n=4, noise=Classification(0.1), learner="quantum_nonzero")
        ExperimentConfig(n=4, noise=Depolarizing(0.1), learner="quantum_majority")
        ExperimentConfig(n=4, noise=Depolarizing(0.1), learner="lpn_bruteforce")

    def test_elimination_needs_noiseless(self):
        with pytest.raises(ConfigurationError):
            ExperimentConfig(
                n=4, noise=Classification(0.1), learner="noiseless_classical"
            )

    def test_nonzero_rejects_depolarizing(self):
        with pytest.raises(ConfigurationError):
            ExperimentConfig(n=4, noise=Depolarizing(0.1), learner="quantum_nonzero")

    def test_majority_needs_depolarizing(self):
        with pytest.raises(ConfigurationError):
            ExperimentConfig(n=4, noise=Noiseless(), learner="quantum_majority")

    def test_unknown_learner(self):
        with pytest.raises(ConfigurationError):
            ExperimentConfig(n=4, noise=Noiseless(), learner="oracle_psychic")

    def test_concept_length_checked(self):
        with pytest.raises(ConfigurationError):
            ExperimentConfig(
                n=4,
                noise=Noiseless(),
                learner="noiseless_classical",
                fixed_concept=BitString.from_text("101"),
            )


class TestRunExperiment:
    def test_schema_and_order(self):
        config = ExperimentConfig(
            n=6, noise=Noiseless(), learner="noiseless_classical", trials=5, seed=3
        )
        records, summary = run_experiment(config)
        assert [r.trial_index for r in records] == list(range(5))
        assert all(r.noise_model == "noiseless" and r.seed == 3 for r in records)
        assert summary.trials == 5
        assert 0.0 <= summary.ci_low <= summary.success_rate <= summary.ci_high <= 1.0

    def test_csv_header_and_determinism(self):
        config = ExperimentConfig(
            n=8,
            noise=Depolarizing(0.2),
            learner="quantum_majority",
            trials=4,
            seed=11,
        )
        texts = [records_to_csv(run_experiment(config)[0]) for _ in range(2)]
        assert texts[0] == texts[1]
        header = texts[0].splitlines()[0]
        assert header == ",".join(CSV_COLUMNS)
        assert len(texts[0].splitlines()) == 5

    def test_timing_column_zeroed_by_default(self):
        config = ExperimentConfig(
            n=32,
            noise=Depolarizing(0.2),
            learner="quantum_majority",
            trials=2,
            seed=0,
        )
        records, _ = run_experiment(config)
        col = CSV_COLUMNS.index("wall_time_ms")
        for line in records_to_csv(records).splitlines()[1:]:
            assert line.split(",")[col] == "0"
        timed = records_to_csv(records, include_timing=True)
        values = [int(line.split(",")[col]) for line in timed.splitlines()[1:]]
        assert values == [r.wall_time_ms for r in records]

    def test_fixed_concept_and_full_success(self):
        config = ExperimentConfig(
            n=5,
            noise=Noiseless(),
            learner="noiseless_classical",
            trials=10,
            seed=0,
            fixed_concept=BitString.from_text("10110"),
        )
        _, summary = run_experiment(config)
        assert summary.success_rate == 1.0

    def test_lpn_learners_run_under_depolarizing(self):
        config = ExperimentConfig(
            n=8,
            noise=Depolarizing(0.05),
            learner="lpn_bruteforce",
            trials=5,
            seed=2,
            map_examples=400,
        )
        _, summary = run_experiment(config)
        assert summary.success_rate >= 0.6


class TestVerify:
    def test_all_suites_pass(self):
        report = verify("all")
        assert report.passed, "\n".join(report.lines())

    def test_lines_format(self):
        report = verify("bounds")
        lines = report.lines()
        assert lines
        assert all(line.startswith(("[PASS]", "[FAIL]")) for line in lines)

    def test_unknown_suite(self):
        with pytest.raises(ConfigurationError):
            verify("everything")


class TestSeparation:
    def test_rows_and_csv(self, tmp_path):
        rows = separation_report([8, 16], eta=0.1, delta=0.05, trials=3, seed=1)
        learners_at_8 = {r["learner"] for r in rows if r["n"] == 8}
        assert learners_at_8 == {
            "quantum_majority",
            "noiseless_classical",
            "lpn_bruteforce",
            "lpn_bkw",
        }
        quantum = {r["n"]: r for r in rows if r["learner"] == "quantum_majority"}
        assert quantum[8]["success_rate"] == 1.0
        assert quantum[8]["mean_queries"] < quantum[16]["mean_queries"]
        text = separation_to_csv(rows)
        assert text.splitlines()[0] == ",".join(SEPARATION_COLUMNS)
        assert len(text.splitlines()) == len(rows) + 1

    def test_solver_rows_dropped_past_caps(self):
        rows = separation_report([48], eta=0.1, delta=0.05, trials=2, seed=0)
        learners_present = {r["learner"] for r in rows}
        assert learners_present == {"quantum_majority", "noiseless_classical"}

    def test_figure_file_created(self, tmp_path):
        rows = separation_report([4, 8], eta=0.1, delta=0.05, trials=2, seed=5)
        path = tmp_path / "sep.png"
        plot_separation(rows, str(path))
        assert path.exists() and path.stat().st_size > 0


class TestConfigFile:
    def test_parse_key_values(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("n = 8\nlearner=quantum_majority # comment\n\n# full line\neta=0.2\n")
        assert read_config_file(str(path)) == {
            "n": "8",
            "learner": "quantum_majority",
            "eta": "0.2",
        }

    def test_bad_line(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("just-a-word\n")
        with pytest.raises(ConfigurationError):
            read_config_file(str(path))


class TestCli:
    def test_sample_deterministic(self):
        runner = CliRunner()
        args = ["sample", "--n", "3", "--concept", "101", "--count", "5", "--seed", "7"]
        outs = [runner.invoke(main, args) for _ in range(2)]
        assert outs[0].exit_code == 0
        assert outs[0].output == outs[1].output
        lines = outs[0].output.splitlines()
        assert lines[0] == "m_or_x,b_or_y"
        assert len(lines) == 6
        assert all(set(line.replace(",", "")) <= {"0", "1"} for line in lines[1:])

    def test_learn_reports_success(self):
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["learn", "--n", "6", "--learner", "noiseless_classical", "--seed", "4"],
        )
        assert result.exit_code == 0
        assert "success:      True" in result.output

    def test_experiment_stdout_csv(self):
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "experiment", "--n", "4", "--learner", "quantum_nonzero",
                "--noise", "classification", "--eta", "0.3", "--trials", "3",
            ],
        )
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == ",".join(CSV_COLUMNS)

    def test_experiment_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n=4\nlearner=noiseless_classical\ntrials=2\nseed=9\n")
        out = tmp_path / "trials.csv"
        runner = CliRunner()
        result = runner.invoke(
            main,
            ["experiment", "--config", str(cfg), "--trials", "3", "--output", str(out)],
        )
        assert result.exit_code == 0
        assert len(out.read_text().splitlines()) == 4  # header + 3 overridden trials

    def test_bad_pairing_exits_two(self):
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "experiment", "--n", "4", "--learner", "quantum_majority",
                "--noise", "noiseless",
            ],
        )
        assert result.exit_code == 2

    def test_missing_required_exits_two(self):
        runner = CliRunner()
        result = runner.invoke(main, ["experiment", "--n", "4"])
        assert result.exit_code == 2

    def test_verify_exits_zero(self):
        runner = CliRunner()
        result = runner.invoke(main, ["verify", "--suite", "bounds"])
        assert result.exit_code == 0
        assert "[PASS]" in result.output

    def test_separation_writes_csv_and_figure(self, tmp_path):
        out = tmp_path / "sep.csv"
        runner = CliRunner()
        result = runner.invoke(
            main,
            [
                "separation", "--n-list", "4,8", "--eta", "0.1", "--trials", "2",
                "--seed", "3", "--output", str(out),
            ],
        )
        assert result.exit_code == 0
        assert out.exists()
        assert (tmp_path / "sep.png").exists()
        assert out.read_text().splitlines()[0] == ",".join(SEPARATION_COLUMNS)
