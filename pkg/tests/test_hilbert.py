import numpy as np
import pytest

from cavelim.errors import ValidationError
from cavelim.hilbert import (
    AtomSpace,
    FockSpace,
    SparseOperator,
    annihilator,
    apply,
    sigma,
    tensor,
)

RNG = np.random.default_rng(20260808)


def random_sparse(dim, nnz, rng=RNG):
    entries = []
    for _ in range(nnz):
        r = int(rng.integers(dim))
        c = int(rng.integers(dim))
        entries.append((r, c, complex(rng.normal(), rng.normal())))
    return SparseOperator(dim, entries)


def test_sigma_projector_onto_ground():
    atom = AtomSpace(3)
    p = sigma(atom, 0, 0)
    assert p.entries == ((0, 0, 1 + 0j),)
    assert np.trace(p.to_dense()).real == 1.0


def test_sigma_product_composes_transitions():
    atom = AtomSpace(3)
    assert (sigma(atom, 1, 0) @ sigma(atom, 0, 1)) == sigma(atom, 1, 1)


def test_sigma_dagger_swaps_indices_exhaustively():
    atom = AtomSpace(4)
    for i in range(4):
        for j in range(4):
            assert sigma(atom, i, j).dagger() == sigma(atom, j, i)


def test_sigma_index_out_of_range():
    with pytest.raises(ValidationError):
        sigma(AtomSpace(3), 0, 3)


def test_sigma_algebra_exhaustive_small_spaces():
    # sigma(i,j) sigma(k,l) = delta_jk sigma(i,l)
    for n in range(2, 6):
        atom = AtomSpace(n)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        prod = sigma(atom, i, j) @ sigma(atom, k, l)
                        expect = sigma(atom, i, l) if j == k else SparseOperator(n)
                        assert prod == expect


def test_annihilator_cutoff_one():
    a = annihilator(FockSpace(1))
    assert np.allclose(a.to_dense(), [[0, 1], [0, 0]])


def test_number_operator_diagonal():
    fock = FockSpace(5)
    a = annihilator(fock)
    n_op = (a.dagger() @ a).to_dense()
    assert np.allclose(n_op, np.diag(np.arange(6.0)))


def test_commutator_defect_only_at_cutoff():
    fock = FockSpace(4)
    a = annihilator(fock)
    comm = a.commutator(a.dagger()).to_dense()
    # [a, a+]|n> = |n> below the truncation edge, -cutoff at the edge
    assert np.allclose(np.diag(comm)[:4], 1.0)
    assert np.isclose(comm[4, 4].real, -4.0)


def test_tensor_identities():
    i2 = SparseOperator.identity(2)
    i3 = SparseOperator.identity(3)
    assert tensor(i2, i3) == SparseOperator.identity(6)


def test_tensor_entry_count_multiplies():
    a = random_sparse(3, 4)
    b = random_sparse(4, 5)
    assert tensor(a, b).nnz == a.nnz * b.nnz


def test_tensor_dagger_distributes():
    atom = AtomSpace(3)
    a = annihilator(FockSpace(2))
    left = tensor(sigma(atom, 1, 0), a).dagger()
    right = tensor(sigma(atom, 0, 1), a.dagger())
    assert left == right


def test_tensor_associative_up_to_float_noise():
    for _ in range(10):
        a = random_sparse(2, 3)
        b = random_sparse(3, 4)
        c = random_sparse(2, 3)
        assert tensor(tensor(a, b), c).allclose(tensor(a, tensor(b, c)), tol=1e-12)


def test_tensor_matches_numpy_kron():
    a = random_sparse(3, 5)
    b = random_sparse(4, 6)
    assert np.allclose(tensor(a, b).to_dense(), np.kron(a.to_dense(), b.to_dense()))


def test_apply_identity_and_basis_mapping():
    atom = AtomSpace(3)
    v = RNG.normal(size=3) + 1j * RNG.normal(size=3)
    assert np.allclose(apply(SparseOperator.identity(3), v), v)
    e_g = np.array([1, 0, 0], dtype=complex)
    assert np.allclose(apply(sigma(atom, 1, 0), e_g), [0, 1, 0])


def test_apply_dimension_mismatch():
    with pytest.raises(ValidationError):
        apply(SparseOperator.identity(3), np.zeros(4, dtype=complex))


def test_apply_agrees_with_dense_oracle():
    for dim in (5, 16, 64):
        op = random_sparse(dim, 3 * dim)
        v = RNG.normal(size=dim) + 1j * RNG.normal(size=dim)
        dense = op.to_dense() @ v
        got = apply(op, v)
        assert np.linalg.norm(got - dense) <= 1e-12 * max(1.0, np.linalg.norm(dense))


def test_apply_norm_bound():
    op = random_sparse(12, 30)
    for _ in range(10):
        v = RNG.normal(size=12) + 1j * RNG.normal(size=12)
        assert np.linalg.norm(apply(op, v)) <= op.one_norm() * np.linalg.norm(v) * (1 + 1e-12)


def test_canonical_form_drops_zeros_and_sorts():
    op = SparseOperator(3, [(2, 1, 1.0), (0, 0, 2.0), (2, 1, -1.0), (1, 2, 3.0)])
    assert op.entries == ((0, 0, 2 + 0j), (1, 2, 3 + 0j))


def test_hermiticity_check():
    atom = AtomSpace(3)
    h = sigma(atom, 0, 1) + sigma(atom, 1, 0)
    assert h.is_hermitian()
    assert not sigma(atom, 0, 1).is_hermitian()


def test_atom_space_invariants():
    with pytest.raises(ValidationError):
        AtomSpace(1)
    with pytest.raises(ValidationError):
        AtomSpace(3, labels=("g", "x", "x"))
    with pytest.raises(ValidationError):
        FockSpace(0)
