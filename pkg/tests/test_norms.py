import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qalpha import (
    ConfigError,
    CorpusSpec,
    Cube,
    GridFunction,
    campanato,
    decompose,
    dyadic_lp,
    dyadic_lp_rearranged,
    enumerate_cubes,
    generate,
    lp_morrey,
    morrey_besov,
    q_alpha,
)
from qalpha.norms import pair_increment_sum

import oracles

UNIT1 = Cube((0.0,), 1.0)


def small_corpus(n, N):
    return [
        generate(CorpusSpec("harmonic", N, n, (("xi0", 3),))),
        generate(CorpusSpec("smoothed_step", N, n, (("sharpness", 6.0),))),
        generate(CorpusSpec("spectral_noise", N, n, (("slope", 0.9),), seed=42)),
    ]


def test_q_alpha_constant_zero():
    f = GridFunction(np.full(16, 5.0))
    cubes = enumerate_cubes(4, 1, n=1)
    for alpha in (0.3, 0.5, 0.7):
        assert q_alpha(f, alpha, cubes).value == 0.0


def test_q_alpha_alternating_matches_oracle():
    f = GridFunction(np.array([0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0]))
    got = q_alpha(f, 0.5, [UNIT1]).value
    want = math.sqrt(oracles.naive_q_alpha_on_cube(f.values, 0.5, (0.0,), 1.0))
    assert got == pytest.approx(want, rel=1e-12)


def test_q_alpha_2d_matches_oracle():
    rng = np.random.default_rng(7)
    f = GridFunction(rng.standard_normal((8, 8)))
    for corner, edge in [((0.0, 0.0), 1.0), ((0.5, 0.0), 0.5)]:
        got = q_alpha(f, 0.3, [Cube(corner, edge)]).value
        want = math.sqrt(oracles.naive_q_alpha_on_cube(f.values, 0.3, corner, edge))
        assert got == pytest.approx(want, rel=1e-12)


def test_q_alpha_two_resolution_consistency():
    vals = {}
    for N in (64, 128):
        x = np.arange(N) / N
        f = GridFunction(np.cos(2 * np.pi * x))
        vals[N] = q_alpha(f, 0.5, [UNIT1]).value
    assert abs(vals[128] / vals[64] - 1) < 0.05


def test_q_alpha_small_cube_skipped_with_warning():
    f = GridFunction(np.arange(8) / 8)
    with pytest.warns(UserWarning, match="fewer than 2"):
        rep = q_alpha(f, 0.5, [Cube((0.24,), 0.02), UNIT1])
    assert len(rep.table) == 1


def test_q_alpha_regime_flag():
    f = GridFunction(np.arange(8) / 8)
    rep = q_alpha(f, 1.2, [UNIT1])
    assert any("outside (0,1)" in fl for fl in rep.flags)


def test_pair_increment_sum_blocking_matches_naive():
    rng = np.random.default_rng(8)
    pos = rng.random((300, 2))
    vals = rng.standard_normal(300)
    naive = 0.0
    for i in range(300):
        for j in range(300):
            if i == j:
                continue
            d2 = np.sum((pos[i] - pos[j]) ** 2)
            naive += (vals[i] - vals[j]) ** 2 / d2 ** (1.25)
    got = pair_increment_sum(pos, vals, 2.5)
    assert got == pytest.approx(naive, rel=1e-11)


def test_campanato_constant_and_oracle():
    cubes = enumerate_cubes(4, 1, n=1)
    assert campanato(GridFunction(np.full(16, 2.0)), 1.0, cubes).value == 0.0
    f = generate(CorpusSpec("smoothed_step", 16, 1, (("sharpness", 6.0),)))
    for lam in (0.5, 1.0):
        got = campanato(f, lam, cubes).value
        want = max(
            math.sqrt(oracles.naive_campanato_on_cube(f.values, lam, c.corner, c.edge))
            for c in cubes
        )
        assert got == pytest.approx(want, rel=1e-12)


def test_campanato_translation_invariance_exact():
    x = np.arange(32) / 32
    f = GridFunction(np.cos(2 * np.pi * 2 * x))
    g = f.roll(16)  # half-period lattice translation
    cubes = enumerate_cubes(5, 2, n=1, shifted=True)
    assert campanato(g, 1.0, cubes).value == campanato(f, 1.0, cubes).value


def test_campanato_lambda_range():
    f = GridFunction(np.ones(16))
    with pytest.raises(ConfigError):
        campanato(f, -0.1, enumerate_cubes(4, 0, n=1))
    with pytest.raises(ConfigError):
        campanato(f, 1.5, enumerate_cubes(4, 0, n=1))


def test_lp_morrey_constant_zero():
    f = GridFunction(np.full(32, 3.0))
    dec = decompose(f, 0)
    assert lp_morrey(f, 0.5, enumerate_cubes(5, 2, n=1), dec).value < 1e-12


def test_lp_morrey_single_harmonic_direct_value():
    # f = cos(2 pi 8 x): only band 3 is active with weight 1, L2 energy 1/2
    N = 64
    x = np.arange(N) / N
    f = GridFunction(np.cos(2 * np.pi * 8 * x))
    dec = decompose(f, 0)
    rep = lp_morrey(f, 0.5, [UNIT1], dec)
    assert rep.value == pytest.approx(math.sqrt(2.0 ** (2 * 0.5 * 3) * 0.5), rel=1e-12)
    # against the loop-level oracle over several cubes
    cubes = enumerate_cubes(6, 2, n=1)
    bands = {j: dec.band(j).values for j in dec.js}
    got = lp_morrey(f, 0.5, cubes, dec).value
    want = max(
        math.sqrt(
            oracles.naive_lp_morrey_on_cube(bands, 0.5, c.corner, c.edge, dec.j_max)
        )
        for c in cubes
    )
    assert got == pytest.approx(want, rel=1e-12)


def test_lp_morrey_requires_bands():
    f = GridFunction(np.ones(32))
    dec = decompose(f, 2)
    with pytest.raises(ConfigError, match="j_min"):
        lp_morrey(f, 0.5, [UNIT1], dec)


def test_lp_morrey_non_dyadic_edge_flagged():
    f = generate(CorpusSpec("harmonic", 32, 1, (("xi0", 3),)))
    dec = decompose(f, 0)
    rep = lp_morrey(f, 0.5, [Cube((0.0,), 0.3)], dec)
    assert any("not dyadic" in fl for fl in rep.flags)
    assert rep.value > 0


@given(scale=st.floats(0.1, 10.0))
@settings(max_examples=20, deadline=None)
def test_norms_one_homogeneous(scale):
    f = generate(CorpusSpec("harmonic", 16, 1, (("xi0", 3),)))
    g = GridFunction(scale * f.values)
    cubes = enumerate_cubes(4, 1, n=1)
    dec_f = decompose(f, 0)
    dec_g = decompose(g, 0)
    assert q_alpha(g, 0.5, cubes).value == pytest.approx(
        scale * q_alpha(f, 0.5, cubes).value, rel=1e-12
    )
    assert campanato(g, 1.0, cubes).value == pytest.approx(
        scale * campanato(f, 1.0, cubes).value, rel=1e-12
    )
    assert lp_morrey(g, 0.5, cubes, dec_g).value == pytest.approx(
        scale * lp_morrey(f, 0.5, cubes, dec_f).value, rel=1e-12
    )


def test_dyadic_lp_fubini_identity_and_k0():
    for f in small_corpus(1, 64):
        dec = decompose(f, 0)
        for K in range(4):
            a = dyadic_lp(f, 0.5, UNIT1, K, dec)
            b = dyadic_lp_rearranged(f, 0.5, UNIT1, K, dec)
            assert a == pytest.approx(b, rel=1e-12)
        # K = 0 reduces to the plain inner sum over I alone
        k0 = dyadic_lp(f, 0.5, UNIT1, 0, dec)
        from qalpha import l2_on_cube

        inner = sum(l2_on_cube(dec.band(j), UNIT1) for j in dec.js)
        assert k0 == pytest.approx(inner, rel=1e-12)


def test_dyadic_lp_matches_triple_loop_oracle():
    for n, N, K in ((1, 16, 1), (2, 16, 1)):
        f = generate(CorpusSpec("spectral_noise", N, n, (("slope", 0.8),), seed=6))
        dec = decompose(f, 0)
        bands = {j: dec.band(j).values for j in dec.js}
        root = Cube((0.0,) * n, 1.0)
        got = dyadic_lp(f, 0.6, root, K, dec)
        want = oracles.naive_dyadic_lp(bands, 0.6, (0.0,) * n, 1.0, K, dec.j_max)
        assert got == pytest.approx(want, rel=1e-12)


def test_dyadic_lp_geometric_weight_spot_value():
    # alpha = 0.5, K = 3, j - level = 5: sum of 2^k for k <= 3 is 15
    w = sum(2.0 ** (2 * 0.5 * k) for k in range(min(3, 5) + 1))
    assert w == 15.0


def test_dyadic_lp_depth_guard():
    f = GridFunction(np.ones(64))
    dec = decompose(f, 0)
    with pytest.raises(ConfigError, match="too deep"):
        dyadic_lp(f, 0.5, UNIT1, 4, dec)
    with pytest.raises(ConfigError, match="positive"):
        dyadic_lp(f, -0.2, UNIT1, 2, dec)


def test_morrey_besov_embedding_case_only():
    f = GridFunction(np.ones(16))
    dec = decompose(f, 0)
    cubes = enumerate_cubes(4, 1, n=1)
    with pytest.raises(ConfigError, match="embedding case"):
        morrey_besov(f, 0.5, 0.0, 2, 4, cubes, dec)
    with pytest.raises(ConfigError, match="embedding case"):
        morrey_besov(f, 0.5, 0.3, 2, 2, cubes, dec)


def test_morrey_besov_single_harmonic():
    N = 64
    x = np.arange(N) / N
    f = GridFunction(np.cos(2 * np.pi * 8 * x))
    dec = decompose(f, 0)
    cubes = enumerate_cubes(6, 3, n=1)
    rep = morrey_besov(f, 0.5, 0.0, 2, 2, cubes, dec)
    bands = {j: dec.band(j).values for j in dec.js}
    want = oracles.naive_morrey_besov(
        bands, 0.5, 0.0, [(c.corner, c.edge) for c in cubes], dec.j_max
    )
    assert rep.value == pytest.approx(want, rel=1e-12)
    # at sigma = 0 the band supremum sits at the root cube
    row3 = [r for r in rep.rows if r[0] == 3][0]
    assert row3[2] == UNIT1
    assert rep.value == pytest.approx(2.0, rel=1e-12)


def test_morrey_besov_dominates_lp_morrey():
    for f in small_corpus(1, 64):
        cubes = enumerate_cubes(6, 3, n=1, shifted=True)
        dec = decompose(f, 0)
        mb = morrey_besov(f, 0.5, 0.0, 2, 2, cubes, dec).value
        lp = lp_morrey(f, 0.5, cubes, dec).value
        assert mb >= lp * (1 - 1e-12)


def test_zero_iff_constant():
    cubes = enumerate_cubes(6, 3, n=1, shifted=True)
    for f in small_corpus(1, 64):
        dec = decompose(f, 0)
        assert q_alpha(f, 0.5, cubes).value > 1e-6
        assert campanato(f, 0.0, cubes).value > 1e-6
        assert lp_morrey(f, 0.5, cubes, dec).value > 1e-6
        assert morrey_besov(f, 0.5, 0.0, 2, 2, cubes, dec).value > 1e-6


def test_family_monotonicity():
    f = generate(CorpusSpec("spectral_noise", 64, 1, (("slope", 0.9),), seed=1))
    small = enumerate_cubes(6, 2, n=1)
    large = enumerate_cubes(6, 3, n=1, shifted=True)
    assert set(small) <= set(large)
    dec = decompose(f, 0)
    assert q_alpha(f, 0.5, large).value >= q_alpha(f, 0.5, small).value
    assert lp_morrey(f, 0.5, large, dec).value >= lp_morrey(f, 0.5, small, dec).value
    assert campanato(f, 1.0, large).value >= campanato(f, 1.0, small).value


def test_q_alpha_translation_invariance_exact():
    f = generate(CorpusSpec("spectral_noise", 64, 1, (("slope", 0.9),), seed=4))
    g = f.roll(32)  # half-torus shift maps the shifted family onto itself
    cubes = enumerate_cubes(6, 3, n=1, shifted=True)
    assert q_alpha(g, 0.5, cubes).value == q_alpha(f, 0.5, cubes).value


def test_norm_comparable_across_profile_families():
    # the norm value should not depend strongly on the cutoff shape
    f = generate(CorpusSpec("spectral_noise", 64, 1, (("slope", 0.9),), seed=42))
    cubes = enumerate_cubes(6, 3, n=1, shifted=True)
    v_exp = lp_morrey(f, 0.5, cubes, decompose(f, 0, family="exp")).value
    v_cos = lp_morrey(f, 0.5, cubes, decompose(f, 0, family="cosine")).value
    assert 0.5 <= v_cos / v_exp <= 2.0


def test_report_serialization_round_trip(tmp_path):
    import json

    f = generate(CorpusSpec("harmonic", 16, 1, (("xi0", 3),)))
    rep = q_alpha(f, 0.5, enumerate_cubes(4, 1, n=1))
    d = rep.to_dict()
    assert d["value"] == rep.value
    assert d["argmax_cube"]["edge"] == rep.argmax_cube.edge
    text = json.dumps(d, sort_keys=True)
    assert json.loads(text)["kind"] == "q_alpha"
    rows = list(rep.csv_rows())
    assert rows[0] == ["corner", "edge", "value"]
    assert len(rows) == 1 + len(rep.table)
