from cdrsim import schemes, validate
from cdrsim.channel import make_rng
from cdrsim.cli import main


def test_all_checks_pass():
    results = validate.run_checks(draws=500, seed=3)
    assert validate.summarize(results), [r.line() for r in results if not r.passed]


def test_scheduler_check_covers_k3_draws():
    rng = make_rng(0)
    instances = list(validate.scheduler_instances(300, rng))
    assert sum(state.k == 3 for _, state in instances) >= 100


def test_sign_error_in_s1_direct_snr_is_caught(monkeypatch, capsys):
    original = schemes.sinr_s1

    def mutant(ch):
        g_rel, _ = original(ch)
        g1, _, g3, _, _ = ch.gammas
        return g_rel, g3 * (g1 - 1.0) / (2.0 * g1 + 1.0)

    monkeypatch.setattr(schemes, "sinr_s1", mutant)
    result = validate.check_scheme_oracle(50, make_rng(1))
    assert not result.passed and "S1" in result.detail
    assert main(["validate", "--draws", "100"]) == 2
    assert "scheme SINRs vs signal-model oracle" in capsys.readouterr().err


def test_broken_scheduler_is_caught(monkeypatch):
    from cdrsim import scheduler

    monkeypatch.setattr(scheduler, "_best_exhaustive", scheduler._best_direct_first)
    equiv, _ = validate.check_scheduler(200, make_rng(2))
    assert not equiv.passed
