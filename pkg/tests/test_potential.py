from fractions import Fraction as F

import pytest

from largen.potential import BadPotential, Potential, parse_potential


def test_quartic_named_form():
    p = parse_potential("quartic:-2,1")
    assert p.gs == (F(-2), F(1))
    assert p.degree == 4


def test_bmp_couplings_and_hodograph():
    p = parse_potential("bmp")
    assert p.gs == (F(90), F(-15), F(1))
    W = p.hodograph()
    # W(r) = 180r - 180r² + 60r³, minimum structure W'(r) = 180(r-1)²
    assert [W[k] for k in range(4)] == [F(0), F(180), F(-180), F(60)]
    assert p.hodograph().derivative()(F(1)) == 0


def test_gaussian():
    p = parse_potential("gaussian")
    assert p.gs == (F(1),)
    assert p.hodograph()(F(1, 2)) == F(1)  # W(r) = 2r, semicircle at T=1


def test_fractional_and_decimal_couplings():
    p = parse_potential("quartic:1/2,0.25")
    assert p.gs == (F(1, 2), F(1, 4))


def test_generic_gs_form():
    p = parse_potential("gs:42,-11,1")
    assert p.gs == (F(42), F(-11), F(1))


def test_inline_json():
    p = parse_potential('{"g": [[-2, 1], [1, 1]]}')
    assert p.gs == (F(-2), F(1))


def test_json_file(tmp_path):
    f = tmp_path / "pot.json"
    f.write_text('{"g": [[90,1],[-15,1],[1,1]]}')
    assert parse_potential(f"@{f}").gs == Potential.bmp().gs


def test_json_round_trip():
    p = parse_potential("quartic:-2,1")
    import json

    again = parse_potential(json.dumps(p.to_json()))
    assert again.gs == p.gs


def test_v_z_coeffs_odd_only():
    p = parse_potential("quartic:-2,1")
    # V_z = 2g2 z + 4g4 z³ = -4z + 4z³
    assert p.v_z_coeffs() == [F(0), F(-4), F(0), F(4)]


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "quartic:1",
        "quartic:1,2,3",
        "bmp:1",
        "unknownpot:1,2",
        "gs:",
        "quartic:-2,-1",  # leading coupling not positive
        '{"h": []}',
        "gs:1,0",
    ],
)
def test_rejects(bad):
    with pytest.raises(BadPotential):
        parse_potential(bad)


def test_float_coupling_rejected():
    with pytest.raises(BadPotential):
        Potential((0.1, 1.0))


def test_psi_matches_quartic_closed_form():
    p = parse_potential("quartic:-2,1")
    # Ψ(r) = g2 + 4 g4 r
    psi = p.psi()
    assert psi(F(0)) == F(-2) and psi(F(1, 2)) == F(0)
