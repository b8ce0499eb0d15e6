"""Words, relators, and matrix evaluation for the genus-g translation groups."""

import numpy as np
import pytest

from hyperband.surface_group import (
    SurfaceGroup,
    Word,
    abelianize,
    evaluate_word,
    free_reduce,
    make_surface_group,
)


def test_generator_names_alternate_a_b():
    g = make_surface_group(3)
    assert g.generator_names == ("a1", "b1", "a2", "b2", "a3", "b3")


def test_relator_has_length_4g_and_abelianizes_to_zero():
    for genus in (1, 2, 3, 5):
        g = make_surface_group(genus)
        r = g.relator()
        assert len(r) == 4 * genus
        assert abelianize(r, genus) == tuple([0] * (2 * genus))


def test_relator_structure_genus_one():
    # a1 b1 a1^-1 b1^-1
    r = make_surface_group(1).relator()
    assert r.letters == ((1, 1), (2, 1), (1, -1), (2, -1))


def test_genus_zero_rejected():
    with pytest.raises(ValueError):
        make_surface_group(0)


def test_word_validates_exponents():
    with pytest.raises(ValueError):
        Word(((1, 2),))
    with pytest.raises(ValueError):
        Word(((0, 1),))


def test_word_product_concatenates_without_reduction():
    w = Word(((1, 1),)) * Word(((1, -1),))
    assert len(w) == 2  # no silent cancellation
    assert len(free_reduce(w)) == 0


def test_inverse_reverses_and_flips():
    w = Word(((1, 1), (2, -1), (3, 1)))
    assert w.inverse().letters == ((3, -1), (2, 1), (1, -1))
    assert len(free_reduce(w * w.inverse())) == 0


def test_free_reduce_cancels_nested_pairs():
    w = Word(((1, 1), (2, 1), (2, -1), (1, -1), (3, 1)))
    assert free_reduce(w).letters == ((3, 1),)


def test_free_reduce_fixed_point_of_reduced_word():
    w = Word(((1, 1), (2, 1), (1, -1)))
    assert free_reduce(w) == w


def test_abelianize_counts_signed_occurrences():
    w = Word(((1, 1), (2, -1), (1, 1), (4, -1)))
    assert abelianize(w, 2) == (2, -1, 0, -1)


def test_check_word_rejects_out_of_range_generators():
    g = make_surface_group(1)
    with pytest.raises(ValueError):
        g.check_word(Word(((3, 1),)))


def test_evaluate_word_ordered_product():
    rng = np.random.default_rng(0)
    mats = [rng.normal(size=(3, 3)) for _ in range(4)]
    w = Word(((1, 1), (3, 1), (2, -1)))
    expected = mats[0] @ mats[2] @ np.linalg.inv(mats[1])
    got = evaluate_word(w, mats)
    assert np.allclose(got, expected)


def test_evaluate_word_empty_is_identity():
    mats = [np.eye(2)] * 2
    assert np.array_equal(evaluate_word(Word(()), mats), np.eye(2))


def test_evaluate_word_singular_matrix_inverse_raises():
    mats = [np.zeros((2, 2)), np.eye(2)]
    with pytest.raises((ValueError, np.linalg.LinAlgError)):
        evaluate_word(Word(((1, -1),)), mats)


def test_evaluate_relator_on_commuting_matrices_is_identity():
    rng = np.random.default_rng(1)
    # diagonal matrices commute, so any relator evaluates to the identity
    for genus in (1, 2):
        g = make_surface_group(genus)
        mats = [np.diag(rng.uniform(0.5, 2.0, size=3)) for _ in range(2 * genus)]
        out = evaluate_word(g.relator(), mats)
        assert np.allclose(out, np.eye(3), atol=1e-12)


def test_group_is_frozen():
    g = make_surface_group(2)
    with pytest.raises(AttributeError):
        g.genus = 3
