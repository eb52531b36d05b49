from __future__ import annotations

from collections import Counter

from intmodel.corpus import (
    base_change_setups,
    corpus_summary,
    ex44_model,
    example_4_4,
    fubini_instances,
    generate_corpus,
    named_category,
    right_proper,
    slice_model,
    structures,
)
from intmodel.integral import check_proper, check_relative
from intmodel.modelstruct import check_model

# regression values: recorded from the first full generation and cross-checked
# against the enumeration counts in test_modelstruct
FROZEN_KINDS = {"slice": 69, "coslice": 69, "constant[ex44]": 71, "constant[triv(I1)]": 71}
FROZEN_BASES = {"chain4": 140, "B2": 88, "chain3": 40, "I1": 12}


def test_corpus_counts(corpus):
    assert len(corpus) == 280
    assert corpus_summary(corpus) == FROZEN_KINDS
    assert dict(Counter(i.base_cat for i in corpus)) == FROZEN_BASES


def test_corpus_is_proper_relative_and_canonical(corpus):
    assert [i.name for i in corpus] == [i.name for i in generate_corpus()]
    for inst in corpus[::17]:
        assert check_proper(inst.functor).ok and check_relative(inst.functor).ok


def test_corpus_limit():
    assert len(generate_corpus(limit=5)) == 5


def test_named_categories():
    assert named_category("I1").objects == ("0", "1")
    assert len(named_category("B2").objects) == 4


def test_slice_models_are_model_categories():
    for mc in structures("chain3")[:5]:
        for x in mc.base.objects:
            assert check_model(slice_model(mc, x)).ok


def test_example_functor_relativity(triv_i1):
    assert check_relative(example_4_4(ex44_model())).ok
    assert not check_relative(example_4_4(triv_i1)).ok


def test_setup_collections():
    setups = base_change_setups()
    assert len(setups) == 8
    assert sum(s.mutated is not None for s in setups) == 6
    assert len(fubini_instances()) == 9


def test_right_properness_witness_shape():
    for mc in structures("B2"):
        w = right_proper(mc)
        assert w is None or len(w) >= 2
