import json

from rltlab import cli, suites
from rltlab.suites import SuiteReport


def test_small_runs_are_clean_and_seeded():
    for name, kw in (("prop2", {"trials": 3}), ("prop3", {"trials": 3}), ("thm3", {"trials": 3}),
                     ("thm4", {"trials": 3}), ("qap", {"trials": 2}), ("thm7", {"d_max": 2})):
        a = suites.SUITES[name](seed=7, **kw)
        b = suites.SUITES[name](seed=7, **kw)
        assert a.ok, a.violations[:1]
        assert a.checks == b.checks and a.stats == b.stats and a.checks > 0


def test_random_polytopes_are_nonempty():
    import random
    rng = random.Random(3)
    for _ in range(30):
        P = suites.random_polytope(rng)
        assert not P.is_empty()
        assert all(d <= 8 for r in P.rows for d in (a.denominator for a in r.coef))


def test_violations_are_reported_with_exit_1(monkeypatch, capsys):
    def broken(seed=0, trials=1):
        rep = SuiteReport("prop2")
        rep.expect(False, "planted failure", polytope={"n": 1, "binary": [0], "rows": []}, point=["1/2"])
        return rep

    monkeypatch.setitem(suites.SUITES, "prop2", broken)
    monkeypatch.setitem(cli.SUITES, "prop2", broken)
    code = cli.main(["verify", "--suite", "prop2", "--json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 1 and not doc["ok"]
    assert doc["violations"][0]["polytope"]["n"] == 1
