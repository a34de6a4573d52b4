"""Observable construction, class membership, and exact spectra."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzcert import (
    DegenerateSpectrumError,
    InputError,
    NegatedElementError,
    NotInGroupError,
    build_observable,
    canonical_generators,
    check_class_membership,
    element_from_index,
    enumerate_group,
    key_eigenvalues,
    membership,
    pauli_from_label,
    spectrum,
)

from _sigma_oracle import dense_from_label


def obs_from_labels(n, labels, coeffs=None, sigmas=None):
    coeffs = coeffs or [1.0] * len(labels)
    terms = [(c, pauli_from_label(n, lab)) for c, lab in zip(coeffs, labels)]
    return build_observable(n, terms, sigmas=sigmas)


def dense_eigenvalues(obs):
    """Independent spectrum: literal sigma matrices, descending eigvalsh."""
    dim = 1 << obs.n
    total = np.zeros((dim, dim), dtype=complex)
    for alpha, elem in obs.terms:
        total += alpha * dense_from_label(elem.label())
    assert np.allclose(total, total.conj().T, atol=1e-12)
    return np.linalg.eigvalsh(total)[::-1]


def flatten(spec):
    values = []
    for v, m in spec.distinct_values:
        values.extend([v] * m)
    return values


class TestBuildObservable:
    def test_accepts_pauli_and_group_elements(self):
        obs = build_observable(
            2, [(1.0, pauli_from_label(2, "xx")), (2.0, element_from_index(2, 1))]
        )
        assert obs.coefficients == (1.0, 2.0)
        assert [e.label() for e in obs.elements] == ["xx", "zz"]

    def test_merges_duplicates(self):
        obs = obs_from_labels(2, ["xx", "zz", "xx"], coeffs=[1.0, 2.0, 0.5])
        assert obs.coefficients == (1.5, 2.0)

    def test_merged_sigma_is_quadrature_over_coefficient(self):
        obs = obs_from_labels(
            2, ["xx", "xx"], coeffs=[1.0, 2.0], sigmas=[0.3, 0.4]
        )
        expected = ((1.0 * 0.3) ** 2 + (2.0 * 0.4) ** 2) ** 0.5 / 3.0
        assert obs.sigmas == (pytest.approx(expected),)

    def test_drops_zero_coefficient_with_warning(self):
        with pytest.warns(UserWarning, match="zero-coefficient"):
            obs = obs_from_labels(2, ["xx", "zz"], coeffs=[0.0, 1.0])
        assert [e.label() for e in obs.elements] == ["zz"]
        with pytest.warns(UserWarning):
            obs = obs_from_labels(2, ["xx", "xx", "zz"], coeffs=[1.0, -1.0, 2.0])
        assert [e.label() for e in obs.elements] == ["zz"]

    def test_errors(self):
        with pytest.raises(InputError, match="at least one term"):
            build_observable(2, [])
        with pytest.raises(InputError, match="all terms have zero"):
            with pytest.warns(UserWarning):
                obs_from_labels(2, ["xx"], coeffs=[0.0])
        with pytest.raises(InputError, match=r"terms\[1\]"):
            build_observable(
                2, [(1.0, pauli_from_label(2, "xx")), (1.0, pauli_from_label(3, "xxx"))]
            )
        with pytest.raises(NotInGroupError, match=r"terms\[0\]"):
            obs_from_labels(2, ["xI"])
        with pytest.raises(NegatedElementError, match=r"terms\[1\]"):
            build_observable(
                2,
                [(1.0, pauli_from_label(2, "xx")),
                 (1.0, pauli_from_label(2, "zz", sign=-1))],
            )
        with pytest.raises(InputError, match="not finite"):
            obs_from_labels(2, ["xx"], coeffs=[float("nan")])
        with pytest.raises(InputError, match="uncertainties for"):
            obs_from_labels(2, ["xx", "zz"], sigmas=[0.1])
        with pytest.raises(InputError, match=">= 0"):
            obs_from_labels(2, ["xx"], sigmas=[-0.1])


class TestClassMembership:
    def test_three_party_cases(self):
        # xyy + yxy: two terms, rank 2.
        r = check_class_membership(obs_from_labels(3, ["xyy", "yxy"]))
        assert not r.in_class and r.rank == 2
        assert any("term count 2 < n = 3" in f for f in r.failures)
        # xyy + yxy + zzI: dependent triple, rank still 2.
        r = check_class_membership(obs_from_labels(3, ["xyy", "yxy", "zzI"]))
        assert not r.in_class and r.rank == 2
        assert any("rank 2 < n = 3" in f for f in r.failures)
        # xyy + yxy + yyx: independent, in class.
        r = check_class_membership(obs_from_labels(3, ["xyy", "yxy", "yyx"]))
        assert r.in_class and r.rank == 3 and r.failures == ()

    def test_four_term_correlation_observable(self):
        r = check_class_membership(obs_from_labels(3, ["xyy", "yxy", "yyx", "xxx"]))
        assert r.in_class and r.rank == 3

    def test_negative_coefficient_fails(self):
        r = check_class_membership(
            obs_from_labels(2, ["xx", "zz"], coeffs=[1.0, -1.0])
        )
        assert not r.in_class
        assert any("not positive" in f for f in r.failures)
        assert r.rank == 2

    def test_canonical_generators_in_class(self):
        for n in range(2, 7):
            obs = build_observable(n, [(1.0, g) for g in canonical_generators(n)])
            assert check_class_membership(obs).in_class


class TestSpectrum:
    def test_frozen_small_spectra(self):
        # Two independent generators at n = 2: values 2, 0, 0, -2.
        spec = spectrum(obs_from_labels(2, ["xx", "zz"]))
        assert spec.distinct_values == ((2.0, 1), (0.0, 2), (-2.0, 1))
        assert spec.trivial_value == 2.0 and spec.trivial_multiplicity == 1

        # The four-term three-party observable: 4, 0 (x6), -4.
        spec = spectrum(obs_from_labels(3, ["xyy", "yxy", "yyx", "xxx"]))
        assert spec.distinct_values == ((4.0, 1), (0.0, 6), (-4.0, 1))

        # Dependent pair: 2 (x2), 0 (x4), -2 (x2); trivial value degenerate.
        spec = spectrum(obs_from_labels(3, ["xyy", "yxy"]))
        assert spec.distinct_values == ((2.0, 2), (0.0, 4), (-2.0, 2))
        assert spec.trivial_multiplicity == 2

        # Dependent triple: 3 (x2), -1 (x6).
        spec = spectrum(obs_from_labels(3, ["xyy", "yxy", "zzI"]))
        assert spec.distinct_values == ((3.0, 2), (-1.0, 6))
        assert spec.trivial_multiplicity == 2

        # Independent triple: 3, 1 (x3), -1 (x3), -3.
        spec = spectrum(obs_from_labels(3, ["xyy", "yxy", "yyx"]))
        assert spec.distinct_values == ((3.0, 1), (1.0, 3), (-1.0, 3), (-3.0, 1))
        assert spec.trivial_multiplicity == 1

    def test_key_eigenvalues(self):
        spec = spectrum(obs_from_labels(3, ["xyy", "yxy", "yyx", "xxx"]))
        assert key_eigenvalues(spec) == (4.0, 0.0, -4.0)
        for n in range(2, 7):
            obs = build_observable(n, [(1.0, g) for g in canonical_generators(n)])
            assert key_eigenvalues(spectrum(obs)) == (float(n), float(n - 2), float(-n))

    def test_identity_multiple_is_degenerate(self):
        spec = spectrum(obs_from_labels(2, ["II"], coeffs=[2.5]))
        assert spec.distinct_values == ((2.5, 4),)
        assert spec.trivial_multiplicity == 4
        with pytest.raises(DegenerateSpectrumError):
            key_eigenvalues(spec)

    def test_matches_dense_oracle(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(1, min(1 << n, 10) + 1))
            indices = rng.choice(1 << n, size=m, replace=False)
            coeffs = [float(c) for c in 5.0 - rng.uniform(0.0, 5.0, size=m)]
            obs = build_observable(
                n, [(c, element_from_index(n, int(p))) for c, p in zip(coeffs, indices)]
            )
            fast = flatten(spectrum(obs))
            dense = dense_eigenvalues(obs)
            assert np.allclose(fast, dense, atol=1e-9)

    def test_signed_coefficients_match_dense(self, rng):
        # Negative and mixed coefficients leave the class but the spectrum
        # machinery must still be exact.
        for _ in range(100):
            n = int(rng.integers(2, 6))
            m = int(rng.integers(1, min(1 << n, 6) + 1))
            indices = rng.choice(1 << n, size=m, replace=False)
            coeffs = [float(c) for c in rng.normal(size=m)]
            coeffs = [c if c != 0 else 0.5 for c in coeffs]
            obs = build_observable(
                n, [(c, element_from_index(n, int(p))) for c, p in zip(coeffs, indices)]
            )
            assert np.allclose(flatten(spectrum(obs)), dense_eigenvalues(obs), atol=1e-9)

    def test_integer_and_float_paths_agree(self):
        labels = ["xyy", "yxy", "yyx", "xxx"]
        ints = spectrum(obs_from_labels(3, labels, coeffs=[2.0, 1.0, 3.0, 1.0]))
        floats = spectrum(obs_from_labels(3, labels, coeffs=[1.0, 0.5, 1.5, 0.5]))
        assert [(2 * v, m) for v, m in floats.distinct_values] == list(ints.distinct_values)

    def test_completion_choice_is_irrelevant(self):
        # Rank-deficient terms need basis completion; any full-rank
        # completion must give the same multiset.
        obs = obs_from_labels(3, ["xyy", "yxy"], coeffs=[1.25, 0.75])
        default = spectrum(obs)
        alternates = [
            list(reversed(canonical_generators(3))),
            [element_from_index(3, p) for p in (7, 3, 4)],
            enumerate_group(3),
        ]
        for completion in alternates:
            alt = spectrum(obs, completion=completion)
            assert alt.distinct_values == default.distinct_values
            assert alt.trivial_multiplicity == default.trivial_multiplicity

    def test_rank_deficient_completion_error(self):
        obs = obs_from_labels(3, ["xyy", "yxy"])
        with pytest.raises(InputError, match="full rank"):
            spectrum(obs, completion=[element_from_index(3, 3)])

    def test_streaming_matches_materialized(self):
        obs = obs_from_labels(
            3, ["xyy", "yxy", "yyx", "xxx"], coeffs=[1.0, 2.0, 0.5, 1.5]
        )
        full = spectrum(obs, materialize=True)
        stream = spectrum(obs, materialize=False)
        assert stream.distinct_values is None
        assert stream.max_value == pytest.approx(full.max_value, abs=1e-12)
        assert stream.second_value == pytest.approx(full.second_value, abs=1e-12)
        assert stream.min_value == pytest.approx(full.min_value, abs=1e-12)
        assert stream.trivial_multiplicity == full.trivial_multiplicity
        assert key_eigenvalues(stream) == key_eigenvalues(full)

    def test_streaming_random_agreement(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 7))
            m = int(rng.integers(1, min(1 << n, 7) + 1))
            indices = rng.choice(1 << n, size=m, replace=False)
            coeffs = [float(c) for c in 5.0 - rng.uniform(0.0, 5.0, size=m)]
            obs = build_observable(
                n, [(c, element_from_index(n, int(p))) for c, p in zip(coeffs, indices)]
            )
            full = spectrum(obs, materialize=True)
            stream = spectrum(obs, materialize=False)
            assert stream.max_value == pytest.approx(full.max_value, abs=1e-12)
            assert stream.min_value == pytest.approx(full.min_value, abs=1e-12)
            if full.second_value is None:
                assert stream.second_value is None
            else:
                assert stream.second_value == pytest.approx(full.second_value, abs=1e-12)
            assert stream.trivial_multiplicity == full.trivial_multiplicity

    def test_near_degenerate_values_group(self):
        eps = 5e-13
        obs = obs_from_labels(2, ["xx", "zz"], coeffs=[1.0, 1.0 + eps])
        spec = spectrum(obs)
        # Eigenvalues +-eps collapse into one cluster near zero.
        assert len(spec.distinct_values) == 3
        assert spec.distinct_values[1][1] == 2
        assert abs(spec.distinct_values[1][0]) < 1e-9

    def test_multiplicities_sum_to_dimension(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 8))
            m = int(rng.integers(1, 6))
            indices = rng.choice(1 << n, size=min(m, 1 << n), replace=False)
            obs = build_observable(
                n, [(1.0, element_from_index(n, int(p))) for p in indices]
            )
            spec = spectrum(obs)
            assert sum(mult for _, mult in spec.distinct_values) == 1 << n


class TestBracket:
    def test_single_value_and_pair(self):
        spec = spectrum(obs_from_labels(3, ["xyy", "yxy", "yyx"]))
        assert spec.bracket(3.0) == (3.0,)
        assert spec.bracket(1.0 + 5e-10) == (1.0,)
        assert spec.bracket(2.0) == (1.0, 3.0)
        assert spec.bracket(-2.0) == (-3.0, -1.0)
        assert spec.bracket(0.5) == (-1.0, 1.0)

    def test_streaming_bracket_top_gap_only(self):
        obs = obs_from_labels(3, ["xyy", "yxy", "yyx"])
        stream = spectrum(obs, materialize=False)
        assert stream.bracket(2.0) == (1.0, 3.0)
        assert stream.bracket(3.0) == (3.0,)
        assert stream.bracket(-3.0) == (-3.0,)
        with pytest.raises(InputError, match="materialize"):
            stream.bracket(0.0)

    def test_ties_prefer_single_point(self):
        spec = spectrum(obs_from_labels(2, ["xx", "zz"]))
        assert spec.bracket(0.0) == (0.0,)


def test_membership_paths_in_build(rng):
    # Random labels: build_observable accepts exactly the group members.
    for _ in range(200):
        n = int(rng.integers(2, 6))
        label = "".join(rng.choice(list("Ixyz")) for _ in range(n))
        s = pauli_from_label(n, label)
        try:
            membership(s)
            ok = True
        except InputError:
            ok = False
        if ok:
            build_observable(n, [(1.0, s)])
        else:
            with pytest.raises(InputError):
                build_observable(n, [(1.0, s)])


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_spectrum_is_permutation_invariant(data):
    n = data.draw(st.integers(min_value=2, max_value=5))
    m = data.draw(st.integers(min_value=1, max_value=min(6, 1 << n)))
    indices = data.draw(
        st.lists(st.integers(min_value=0, max_value=(1 << n) - 1),
                 min_size=m, max_size=m, unique=True)
    )
    coeffs = data.draw(
        st.lists(st.floats(min_value=0.1, max_value=5.0, allow_nan=False),
                 min_size=len(indices), max_size=len(indices))
    )
    terms = [(c, element_from_index(n, p)) for c, p in zip(coeffs, indices)]
    spec_a = spectrum(build_observable(n, terms))
    perm = data.draw(st.permutations(terms))
    spec_b = spectrum(build_observable(n, list(perm)))
    assert np.allclose(
        [v for v, _ in spec_a.distinct_values],
        [v for v, _ in spec_b.distinct_values],
        atol=1e-9,
    )
    assert [m for _, m in spec_a.distinct_values] == [m for _, m in spec_b.distinct_values]
