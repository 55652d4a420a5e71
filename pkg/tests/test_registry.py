import pytest

from maxcurve.registry import BUNDLED, RegistryError, registry_load, registry_parse

EXPECTED = {"C.canonical", "C.sextic1", "C.sextic2", "D.quartic", "D.affine", "E.weierstrass", "S.quintic", "omega", "cover.map"}

GOOD = """
[model L]
kind = plane-curve
vars = x, y, z
field = 3
equation = x
"""


def test_bundled_registry_has_all_models():
    reg = registry_load()
    assert len(reg) >= 9
    assert EXPECTED <= set(reg)
    assert reg.get_model("C.canonical").kind == "quadric-net"
    assert reg.get_model("omega", "linear-map").matrix()[3][3] == 2


def test_every_bundled_model_parses():
    for m in registry_load().values():
        m.validate()


def test_get_model_errors():
    reg = registry_load()
    with pytest.raises(KeyError, match="unknown model"):
        reg.get_model("nope")
    with pytest.raises(KeyError, match="expected"):
        reg.get_model("omega", "plane-curve")


def test_missing_file(tmp_path):
    with pytest.raises(RegistryError, match="not found"):
        registry_load(tmp_path / "missing.ini")


def test_small_registry_parses():
    reg = registry_parse(GOOD)
    assert reg.get_model("L").plane_curve().degree == 1


@pytest.mark.parametrize(
    "text, line",
    [
        (GOOD + GOOD, 8),
        (GOOD.replace("field = 3", "field = 3\ncolour = red"), 6),
        ("kind = plane-curve\n", 1),
        (GOOD.replace("kind = plane-curve", "kind = surface"), 3),
        (GOOD.replace("equation = x", "equation = x +"), 2),
        (GOOD.replace("vars = x, y, z\n", ""), 2),
        (GOOD.replace("[model L]", "[model]"), 2),
        (GOOD.replace("equation = x", "equation = x\nequation = y"), 7),
        (GOOD.replace("field = 3", "field = 4"), 2),
    ],
)
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(RegistryError) as exc:
        registry_parse(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_non_homogeneous_three_variable_equation():
    with pytest.raises(RegistryError, match="homogeneous"):
        registry_parse(GOOD.replace("equation = x", "equation = x + y^2"))


def test_bundled_file_location():
    assert BUNDLED.name == "models.ini" and BUNDLED.is_file()
