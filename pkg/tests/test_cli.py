import json

import numpy as np
import pytest

from approxnash.cli import dispatch
from approxnash.games import anonymous_regret, bimatrix_regret, load_game, load_profile
from approxnash.instances import anti_coordination_game, dominant_game, gen_random_sparse, matching_pennies


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_dominant(tmp_path, capsys):
    game = write(tmp_path / "g.json", dominant_game(3).to_json())
    prof = write(tmp_path / "p.json", {"q": [1.0, 1.0, 1.0]})
    code, out, _ = run(capsys, "verify", "--game", game, "--profile", prof, "--epsilon", "0.1")
    assert code == 0 and json.loads(out)["max_regret"] == 0.0
    bad = write(tmp_path / "bad.json", {"q": [0.0, 0.0, 0.0]})
    code, out, _ = run(capsys, "verify", "--game", game, "--profile", bad, "--epsilon", "0.1")
    assert code == 1 and json.loads(out)["max_regret"] == 1.0


def test_anon_solve_reverifies(tmp_path, capsys):
    path = write(tmp_path / "g.json", anti_coordination_game(3).to_json())
    code, out, _ = run(capsys, "anon", "solve", "--epsilon", "0.2", "--k", "2", "--d", "2", path)
    assert code == 0
    res = json.loads(out)
    q = np.array(res["profile"]["q"])
    assert anonymous_regret(anti_coordination_game(3), q).max() <= 0.2
    assert abs(anonymous_regret(anti_coordination_game(3), q).max() - res["max_regret"]) <= 1e-9
    prof = write(tmp_path / "p.json", res["profile"])
    code, out, _ = run(capsys, "verify", "--game", path, "--profile", prof, "--epsilon", "0.2")
    assert code == 0


def test_anon_solve_not_found(tmp_path, capsys):
    from approxnash.instances import prescribed_mix_game

    path = write(tmp_path / "g.json", prescribed_mix_game([0.13, 0.41]).to_json())
    code, out, _ = run(capsys, "anon", "solve", "--epsilon", "0.01", "--k", "2", "--d", "2", path)
    assert code == 1 and json.loads(out)["profile"] is None


def test_anon_solve_is_reproducible(tmp_path, capsys):
    path = write(tmp_path / "g.json", anti_coordination_game(4).to_json())
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "anon", "solve", "--epsilon", "0.2", "--k", "2", "--d", "2", path)
        res = json.loads(out)
        res.pop("wall_time")
        outs.append(res)
    assert outs[0] == outs[1]


def test_cover_build_then_check(tmp_path, capsys):
    out_path = str(tmp_path / "c.json")
    code, _, err = run(capsys, "cover", "build", "--n", "2", "--k", "2", "--d", "2", "-o", out_path)
    assert code == 0 and "elements: 15" in err
    code, out, _ = run(capsys, "cover", "check", out_path, "--probs", "0.5", "0.5")
    assert code == 0 and json.loads(out)["tv"] == 0.0
    code, _, err = run(capsys, "cover", "check", out_path, "--probs", "0.5")
    assert code == 2 and err.startswith("error:")


def test_bimatrix_commands(tmp_path, capsys):
    game = gen_random_sparse(32, 2, seed=3)
    path = write(tmp_path / "g.json", game.to_json())
    code, out, _ = run(capsys, "bimatrix", "solve-sparse", path)
    res = json.loads(out)
    assert code == 0 and res["regret_bound"] == 4 / 32
    assert max(res["regrets"]) <= res["regret_bound"]
    mp = write(tmp_path / "mp.json", matching_pennies(2).to_json())
    code, out, err = run(capsys, "bimatrix", "sample", mp, "--epsilon", "0.6", "--max-trials", "200", "--seed", "4")
    assert code == 0 and "seed: 4" in err
    rep = json.loads(out)
    pair = load_profile(rep["first_success"])
    assert max(bimatrix_regret(matching_pennies(2), pair)) <= 0.6
    code2, out2, _ = run(capsys, "bimatrix", "sample", mp, "--epsilon", "0.6", "--max-trials", "200", "--seed", "4")
    assert out2 == out


def test_pbd_commands(capsys):
    code, out, _ = run(capsys, "pbd", "pmf", "--probs", "0.2", "0.3")
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["pmf"], [0.56, 0.38, 0.06], atol=1e-15)
    code, out, _ = run(capsys, "pbd", "tv", "--a", "0.1", "0.4", "--b", "0.25", "0.25")
    assert json.loads(out)["tv"] == pytest.approx(0.045)
    code, out, _ = run(capsys, "pbd", "moments", "--probs", "0.0", "0.25", "0.75", "1.0", "--d", "2")
    assert json.loads(out)["profile"]["ones"] == 1
    code, out, _ = run(capsys, "pbd", "roos", "--probs", "0.2", "0.3", "--p", "0.25", "--L", "2", "--d", "3")
    res = json.loads(out)
    np.testing.assert_allclose(res["expansion"], res["pmf"], atol=1e-9)
    assert res["roos_bound"] > 1
    code, _, _ = run(capsys, "pbd", "pmf", "--probs", "1.5")
    assert code == 2


def test_gen_commands(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "gs", "--ell", "4")
    game = load_game(json.loads(out))
    assert code == 0 and game.n == 6 and game.R[4, 0] == -1.0
    code, out, _ = run(capsys, "gen", "gp", "--k", "2", "--delta", "0.05", "--p", "0.4", "0.6")
    assert code == 0 and load_game(json.loads(out)).k == 2
    code, out, err = run(capsys, "gen", "random", "--kind", "sparse", "--n", "8", "--k", "2", "--seed", "3")
    assert code == 0 and "seed: 3" in err
    again = run(capsys, "gen", "random", "--kind", "sparse", "--n", "8", "--k", "2", "--seed", "3")[1]
    assert again == out
    code, _, _ = run(capsys, "gen", "gp", "--k", "2", "--delta", "0.05", "--p", "0.1", "0.6")
    assert code == 2


def test_sweeps(tmp_path, capsys):
    code, out, _ = run(capsys, "sweep", "tv", "--n", "2", "3", "--d", "1", "2", "--grid", "8")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "side,n,grid,d,groups,pairs,max_tv,roos_bound" and len(lines) == 5
    for line in lines[1:]:
        cells = line.split(",")
        assert float(cells[6]) <= float(cells[7])
    code, out, _ = run(capsys, "sweep", "sampler", "--eps", "0.4", "0.6", "--seeds", "0", "1", "--trials", "50")
    rows = out.strip().splitlines()[1:]
    assert code == 0 and len(rows) == 4
    assert all(0.0 <= float(r.split(",")[-1]) <= 1.0 for r in rows)
    code, out, _ = run(capsys, "sweep", "sampler", "--eps")
    assert code == 0 and out.strip() == "n,eps,seed,t,trials,successes,success_rate"


def test_input_errors(tmp_path, capsys):
    assert run(capsys, "verify", "--game", str(tmp_path / "missing.json"), "--profile", "x")[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(capsys, "anon", "solve", "--epsilon", "0.2", str(broken))[0] == 2
    assert run(capsys, "anon", "solve", "--bogus")[0] == 2
    g = write(tmp_path / "g.json", dominant_game(3).to_json())
    p = write(tmp_path / "p.json", {"q": [1.0, 1.0]})
    assert run(capsys, "verify", "--game", g, "--profile", p)[0] == 2
    assert run(capsys, "bimatrix", "solve-sparse", g)[0] == 2


def test_budget_exit_code(tmp_path, capsys):
    g = write(tmp_path / "g.json", dominant_game(8).to_json())
    assert run(capsys, "anon", "oracle", g, "--grid", "16", "--epsilon", "0.1")[0] == 3
