import csv

import pytest

from rigidpave import ann, cli


@pytest.fixture(scope="module")
def reduced(tmp_path_factory):
    d = tmp_path_factory.mktemp("gen")
    assert cli.main(["gen-dataset", "--reduced", "3", "--out", str(d / "a.csv")]) == 0
    return d / "a.csv"


@pytest.fixture(scope="module")
def trained(reduced, tmp_path_factory):
    d = tmp_path_factory.mktemp("train")
    assert cli.main(["train", "--data", str(reduced), "--seed", "7", "--out", str(d / "m.json"),
                     "--plot", str(d / "fit.svg")]) == 0
    return d / "m.json"


def test_gen_dataset_deterministic_and_refuses_overwrite(reduced, tmp_path):
    b = tmp_path / "b.csv"
    assert cli.main(["gen-dataset", "--reduced", "3", "--out", str(b)]) == 0
    assert reduced.read_bytes() == b.read_bytes()
    lines = reduced.read_text().splitlines()
    assert lines[0].startswith("# rigidpave ") and lines[1].startswith("# config-hash ")
    assert len(lines) == 3 + 1 + 729
    assert cli.main(["gen-dataset", "--reduced", "3", "--out", str(b)]) == 2
    assert cli.main(["gen-dataset", "--reduced", "3", "--out", str(b), "--force"]) == 0


def test_train_deterministic(reduced, trained, tmp_path):
    out = tmp_path / "m.json"
    assert cli.main(["train", "--data", str(reduced), "--seed", "7", "--out", str(out),
                     "--plot", str(tmp_path / "fit.svg")]) == 0
    assert out.read_bytes() == trained.read_bytes()
    assert out.with_suffix(".log.csv").read_bytes() == trained.with_suffix(".log.csv").read_bytes()
    assert (tmp_path / "fit.svg").read_bytes() == (trained.parent / "fit.svg").read_bytes()
    assert ann.load_model(out).meta["val_r2"] > 0.9


def test_train_requires_seed(reduced, tmp_path):
    with pytest.raises(SystemExit):
        cli.main(["train", "--data", str(reduced), "--out", str(tmp_path / "m.json")])


def _run_twice(tmp_path, argv_for):
    outs = []
    codes = []
    for tag in "ab":
        d = tmp_path / tag
        codes.append(cli.main(argv_for(d)))
        outs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())} if d.is_dir() else None)
    return codes, outs


def test_sensitivity_deterministic(tmp_path):
    codes, (a, b) = _run_twice(tmp_path, lambda d: ["sensitivity", "--out-dir", str(d)])
    assert codes == [0, 0]
    assert a == b and {"bond_sensitivity.csv", "moisture_sensitivity.csv", "bond_sensitivity.svg", "moisture_sensitivity.svg"} <= set(a)


def test_validate_deterministic(tmp_path):
    codes, (a, b) = _run_twice(tmp_path, lambda d: ["validate", "--out-dir", str(d)])
    # exit 2 signals that at least one section misses the agreement limits
    assert codes[0] == codes[1] and codes[0] in (0, 2)
    assert a == b and "validation.csv" in a
    with open(tmp_path / "a" / "validation.csv") as fh:
        rows = list(csv.DictReader(l for l in fh if not l.startswith("#")))
    assert len(rows) == 8
    assert (codes[0] == 0) == all(r["pass"] == "pass" for r in rows)


def test_distress_deterministic(tmp_path):
    cases = tmp_path / "cases.csv"
    cases.write_text("label,applied_n,stress_psi,modulus_rupture_psi\nA,5e5,380,650\nB,1e6,300,650\n")
    months = tmp_path / "months.csv"
    months.write_text("label,faultmax_in,de\nm1,0.1,0.04\nm2,0.1,\nm3,0.1,0.04\n")
    outs = []
    for tag in "ab":
        out = tmp_path / f"{tag}.csv"
        assert cli.main(["distress", "--cases", str(cases), "--faulting", str(months), "--section", "27-4034",
                         "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert cli.main(["distress", "--faulting", str(months), "--out", str(tmp_path / "c.csv")]) == 2


def test_predict_k(trained, tmp_path):
    one = ["--h-s", "0.254", "--h-b", "0.127", "--e-slab", "4.1368e10", "--e-base", "1.724e9",
           "--e-subgrade", "1.38e8", "--delta", "0.5"]
    assert cli.main(["predict-k", "--exact", "--out", str(tmp_path / "e.csv"), *one]) == 0
    assert cli.main(["predict-k", "--model", str(trained), "--out", str(tmp_path / "s.csv"), *one]) == 0
    batch = tmp_path / "batch.csv"
    batch.write_text(",".join(cli.BATCH_INPUTS) + "\n0.254,0.127,4.1368e10,1.724e9,1.38e8,0.5\n"
                     "0.5,0.127,4.1368e10,1.724e9,1.38e8,0.5\n")
    for tag in "ab":
        assert cli.main(["predict-k", "--model", str(trained), "--batch", str(batch),
                         "--out", str(tmp_path / f"{tag}.csv")]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    rows = (tmp_path / "a.csv").read_text().splitlines()[-2:]
    assert rows[0].endswith(",no") and rows[1].endswith(",yes")


def test_exit_codes(tmp_path):
    assert cli.main(["predict-k", "--exact", "--h-s", "0.25"]) == 2
    assert cli.main(["predict-k", "--model", str(tmp_path / "missing.json"), "--h-s", "0.25", "--h-b", "0.1",
                     "--e-slab", "3e10", "--e-base", "1e9", "--e-subgrade", "1e8", "--delta", "0.5"]) == 4
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert cli.main(["predict-k", "--model", str(bad), "--h-s", "0.25", "--h-b", "0.1",
                     "--e-slab", "3e10", "--e-base", "1e9", "--e-subgrade", "1e8", "--delta", "0.5"]) == 2
    assert cli.main(["train", "--data", str(tmp_path / "none.csv"), "--seed", "1", "--out", str(tmp_path / "m")]) == 4
