"""Bitmask Pauli algebra against literal sigma-matrix products."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghzcert import InputError, PauliString, commutes, identity, multiply, pauli_from_label
from ghzcert.oracle import dense_matrix

from _sigma_oracle import PLAIN_SIGMA, dense_from_label

LABEL_CHARS = "Ixyz"


def random_label(rng, n):
    return "".join(rng.choice(list(LABEL_CHARS)) for _ in range(n))


def label_strategy(max_n=6):
    return st.text(alphabet=LABEL_CHARS, min_size=1, max_size=max_n)


class TestConstruction:
    def test_identity(self):
        e = identity(3)
        assert e.is_identity
        assert e.label() == "III"
        assert np.allclose(dense_matrix(e), np.eye(8))

    def test_label_round_trip(self):
        for label in ["I", "x", "y", "z", "xyy", "zIz", "yyxz", "IIII"]:
            s = pauli_from_label(len(label), label)
            assert s.label() == label

    def test_rejects_bad_length(self):
        with pytest.raises(InputError):
            pauli_from_label(3, "xx")

    def test_rejects_bad_character(self):
        with pytest.raises(InputError, match="site 2"):
            pauli_from_label(2, "xw")

    def test_rejects_uppercase_xyz(self):
        with pytest.raises(InputError):
            pauli_from_label(2, "XX")

    def test_rejects_bad_sign(self):
        with pytest.raises(InputError):
            pauli_from_label(2, "xx", sign=2)

    def test_rejects_out_of_range_masks(self):
        with pytest.raises(InputError):
            PauliString(2, 0b100, 0)
        with pytest.raises(InputError):
            PauliString(2, 0, 0, phase_exp=4)

    def test_site_count_limits(self):
        with pytest.raises(InputError):
            PauliString(0, 0, 0)
        with pytest.raises(InputError):
            PauliString(65, 0, 0)
        wide = PauliString(64, (1 << 64) - 1, 0)
        assert wide.label() == "x" * 64

    def test_sign_on_real_signed_only(self):
        assert pauli_from_label(2, "zz").sign() == 1
        assert pauli_from_label(2, "zz", sign=-1).sign() == -1
        with pytest.raises(InputError):
            PauliString(1, 1, 1, phase_exp=1).sign()


class TestDenseAgreement:
    def test_y_is_i_sigma_y(self):
        s = pauli_from_label(1, "y")
        assert np.allclose(dense_matrix(s), 1j * PLAIN_SIGMA["y"])

    def test_yy_with_plus_sign(self):
        # (i sigma_y) x (i sigma_y) = -sigma_y x sigma_y
        s = pauli_from_label(2, "yy", sign=1)
        expected = -np.kron(PLAIN_SIGMA["y"], PLAIN_SIGMA["y"])
        assert np.allclose(dense_matrix(s), expected)
        assert np.allclose(dense_from_label("yy"), expected)

    def test_random_labels_match_oracle(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 7))
            label = random_label(rng, n)
            sign = int(rng.choice([1, -1]))
            ours = dense_matrix(pauli_from_label(n, label, sign))
            assert np.allclose(ours, dense_from_label(label, sign), atol=1e-12)

    def test_site_one_is_most_significant(self):
        # zI flips nothing and signs the lower half of the diagonal; the
        # first site must own the big-endian half-blocks.
        s = pauli_from_label(2, "zI")
        assert np.allclose(dense_matrix(s), np.diag([1, 1, -1, -1]))
        s = pauli_from_label(2, "Iz")
        assert np.allclose(dense_matrix(s), np.diag([1, -1, 1, -1]))


class TestMultiply:
    def test_known_product(self):
        # The three-party correlation operators: xyy * yxy = zzI exactly.
        prod = multiply(pauli_from_label(3, "xyy"), pauli_from_label(3, "yxy"))
        assert prod == pauli_from_label(3, "zzI")
        assert prod.phase_exp == 0

    def test_products_match_dense(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 7))
            a = PauliString(n, int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)),
                            int(rng.integers(0, 4)))
            b = PauliString(n, int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)),
                            int(rng.integers(0, 4)))
            lhs = dense_matrix(multiply(a, b))
            rhs = dense_matrix(a) @ dense_matrix(b)
            assert np.allclose(lhs, rhs, atol=1e-12)

    def test_associative_with_identity_unit(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 7))
            strings = [
                PauliString(n, int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)),
                            int(rng.integers(0, 4)))
                for _ in range(3)
            ]
            a, b, c = strings
            assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
            assert multiply(a, identity(n)) == a
            assert multiply(identity(n), a) == a

    def test_square_is_plus_or_minus_identity(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 9))
            a = PauliString(n, int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)),
                            int(rng.integers(0, 4)))
            sq = multiply(a, a)
            assert sq.x_mask == 0 and sq.z_mask == 0
            assert sq.phase_exp in (0, 2)

    def test_size_mismatch(self):
        with pytest.raises(InputError):
            multiply(identity(2), identity(3))

    def test_wide_masks_no_overflow(self):
        a = pauli_from_label(64, "y" * 64)
        sq = multiply(a, a)
        # (i sigma_y)^2 = -1 per site; 64 sites make the signs cancel.
        assert sq == identity(64)


class TestCommutes:
    def test_matches_dense_commutator(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 6))
            a = PauliString(n, int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)))
            b = PauliString(n, int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)))
            da, db = dense_matrix(a), dense_matrix(b)
            dense_commutes = np.allclose(da @ db, db @ da, atol=1e-12)
            assert commutes(a, b) == dense_commutes

    def test_classic_pairs(self):
        assert commutes(pauli_from_label(2, "xx"), pauli_from_label(2, "zz"))
        assert not commutes(pauli_from_label(1, "x"), pauli_from_label(1, "z"))


class TestHermiticity:
    @settings(max_examples=150, deadline=None)
    @given(label=label_strategy(), sign=st.sampled_from([1, -1]))
    def test_real_signed_labels_split_by_y_parity(self, label, sign):
        # Even y-count: Hermitian with eigenvalues +-1.  Odd y-count: the
        # i*sigma_y factors leave one uncancelled i, so anti-Hermitian.
        s = pauli_from_label(len(label), label, sign)
        assert s.is_real_signed
        mat = dense_matrix(s)
        if label.count("y") % 2 == 0:
            assert s.is_hermitian
            assert np.allclose(mat, mat.conj().T, atol=1e-12)
            vals = np.linalg.eigvalsh(mat)
            assert np.allclose(np.abs(vals), 1.0, atol=1e-12)
        else:
            assert not s.is_hermitian
            assert np.allclose(mat, -mat.conj().T, atol=1e-12)

    def test_hermitian_iff_dense_hermitian(self, rng):
        for _ in range(200):
            n = int(rng.integers(1, 6))
            s = PauliString(n, int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)),
                            int(rng.integers(0, 4)))
            mat = dense_matrix(s)
            assert s.is_hermitian == np.allclose(mat, mat.conj().T, atol=1e-12)

    def test_str_prefix_reflects_actual_sign(self):
        # A 'y' label holds phase_exp 2 internally but prints as +.
        assert str(pauli_from_label(1, "y")) == "+y"
        assert str(pauli_from_label(1, "y", sign=-1)) == "-y"
        assert str(pauli_from_label(2, "zz", sign=-1)) == "-zz"
        assert str(PauliString(1, 1, 1, phase_exp=1)) == "-iy"
