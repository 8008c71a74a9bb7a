import json

import pytest

import natmod


def test_term_model_is_a_natural_model():
    m = natmod.term_model(1, 2)
    assert m.empty == "[]"
    assert m.ty("[]") == ["0"]
    assert m.ext("[]", "0")[0] == "[0]"
    r = natmod.check_eat(m, 2)
    assert r.ok and r.total == 0
    assert natmod.check_representability(m, 2)


def test_free_structures():
    base = natmod.term_model(1, 2)
    assert natmod.check_unit(natmod.extend_by_unit(base), 2).ok
    assert natmod.check_sigma(natmod.extend_by_sigma(base, 2), 2).ok
    with pytest.raises(ValueError):
        natmod.check_unit(base, 2)


def test_model_files_round_trip():
    text = natmod.model_to_json(natmod.fam_prop(2), 2)
    back = natmod.parse_model(text)
    assert natmod.model_to_json(back, 2) == text
    assert natmod.check_eat(back, 2).ok
    doc = json.loads(text)
    doc["surplus"] = 1
    with pytest.raises(ValueError):
        natmod.parse_model(json.dumps(doc))


def test_polynomials():
    F = natmod.Polynomial(I=1, B=3, A=2, J=1, s=[0, 0, 0], f=[0, 1, 1], t=[0, 0])
    assert natmod.extend(F, [3]) == [12]
    i = natmod.Polynomial(I=1, B=1, A=1, J=1, s=[0], f=[0], t=[0])
    assert natmod.extend(natmod.compose(i, F), [2]) == natmod.extend(F, [2])
    r = natmod.check_composition(F, F, [2], [3], [[0, 2]])
    assert r.ok, r.text()
    with pytest.raises(ValueError):
        natmod.Polynomial(I=1, B=1, A=1, J=1, s=[0], f=[4], t=[0])


def test_cli_in_process():
    code, out, _ = natmod.cli(["free", "term-model", "--basic", "1", "--bound", "2"])
    assert code == 0
    assert "result: pass" in out
    code, _, _ = natmod.cli(["free", "nonsense"])
    assert code == 2
