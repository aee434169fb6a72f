import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bangbang.operators import (
    PauliString,
    anticommutes,
    embed,
    equal_up_to_phase,
    expand_in_basis,
    expm_hamiltonian,
    from_coefficients,
    is_hermitian,
    is_unitary,
    partial_trace,
    pauli,
    pauli_basis,
    random_density_matrix,
    random_hermitian,
    state_fidelity,
    ket,
)

seeds = st.integers(0, 2**32 - 1)
labels = st.text("IXYZ", min_size=1, max_size=4)


def test_pauli_z():
    assert np.array_equal(pauli("Z", 1), np.diag([1, -1]))


def test_pauli_tensor_product():
    xz = pauli("XZ", 2)
    assert np.allclose(xz, np.kron(pauli("X"), pauli("Z")))
    assert is_hermitian(xz) and is_unitary(xz)


def test_pauli_length_mismatch():
    with pytest.raises(ValueError):
        pauli("ZZ", 3)


def test_pauli_bad_letter():
    with pytest.raises(ValueError):
        pauli("XQ")


def test_embed_qubit_one_is_leftmost():
    assert np.allclose(embed({1: "X"}, 2), np.kron(pauli("X"), np.eye(2)))
    assert np.allclose(embed({2: "Z", 3: "Z"}, 3), pauli("IZZ"))


@pytest.mark.parametrize(
    "a, b, expected",
    [("X", "Z", True), ("ZZ", "XI", True), ("ZZ", "ZI", False)],
)
def test_anticommutes(a, b, expected):
    assert anticommutes(pauli(a), pauli(b)) is expected


def test_expm_dfs_pulse_is_zz_up_to_phase():
    xbar = (pauli("XX") + pauli("YY")) / 2
    u = expm_hamiltonian(xbar, np.pi)
    assert equal_up_to_phase(u, pauli("ZZ"))
    # the global phase comes out as +1 here
    assert np.allclose(u, pauli("ZZ"), atol=1e-12)


def test_expm_zero_angle():
    h = random_hermitian(4, seed=0)
    assert np.allclose(expm_hamiltonian(h, 0.0), np.eye(4))


def test_expm_half_pi_x():
    assert np.allclose(expm_hamiltonian(pauli("X"), np.pi / 2), -1j * pauli("X"), atol=1e-14)


def test_expm_rejects_non_hermitian():
    with pytest.raises(ValueError):
        expm_hamiltonian(np.array([[0, 1], [0, 0]]), 1.0)


@given(seeds)
def test_expm_unitary(seed):
    h = random_hermitian(4, seed=seed)
    h *= 10 / np.linalg.norm(h, 2)
    u = expm_hamiltonian(h, 1.0)
    assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12


def test_expand_identity():
    c = expand_in_basis(np.eye(4), pauli_basis(2))
    assert c[0] == 1 and np.allclose(c[1:], 0)


def test_expand_zbar():
    basis = pauli_basis(2)
    c = expand_in_basis((pauli("ZI") - pauli("IZ")) / 2, basis)
    expected = np.zeros(16)
    expected[basis.index("ZI")] = 0.5
    expected[basis.index("IZ")] = -0.5
    assert np.allclose(c, expected)


def test_basis_structure():
    for n in (1, 2, 3):
        b = pauli_basis(n)
        d = 2**n
        # tr(K_a^dag K_b) = d delta_ab
        gram = np.einsum("aij,bij->ab", b.elements.conj(), b.elements)
        assert np.allclose(gram, d * np.eye(d * d))
        assert np.array_equal(b.elements[0], np.eye(d))
        assert all(is_hermitian(k) for k in b.elements)


@given(seeds, st.integers(1, 3))
def test_basis_completeness(seed, n):
    r = np.random.default_rng(seed)
    d = 2**n
    a = r.normal(size=(d, d)) + 1j * r.normal(size=(d, d))
    basis = pauli_basis(n)
    assert np.max(np.abs(from_coefficients(expand_in_basis(a, basis), basis) - a)) < 1e-12


@given(labels.flatmap(lambda s: st.tuples(st.just(s), st.text("IXYZ", min_size=len(s), max_size=len(s)))))
def test_pauli_string_product_matches_matrices(pair):
    a, b = PauliString(pair[0]), PauliString(pair[1])
    c = a * b
    assert c.phase in (1, -1, 1j, -1j)
    assert np.allclose(c.to_matrix(), a.to_matrix() @ b.to_matrix())
    assert a.commutes_with(b) == (not anticommutes(a.to_matrix(), b.to_matrix()))


@given(labels)
def test_pauli_string_hermitian_unitary(s):
    m = PauliString(s).to_matrix()
    assert is_hermitian(m) and is_unitary(m)


def test_pauli_string_parse():
    p = PauliString.parse("-iXZ")
    assert p.letters == "XZ" and p.phase == -1j
    assert str(-PauliString("YY")) == "-YY"


def test_partial_trace_product_state():
    a = random_density_matrix(2, seed=1)
    b = random_density_matrix(4, seed=2)
    rho = np.kron(a, b)
    assert np.allclose(partial_trace(rho, [1], 3), a)
    assert np.allclose(partial_trace(rho, [2, 3], 3), b)


def test_state_fidelity_vector_and_matrix():
    psi = ket("01")
    assert state_fidelity(np.outer(psi, psi), psi) == pytest.approx(1.0)
    assert state_fidelity(np.eye(4) / 4, psi) == pytest.approx(0.25)
