import pytest

from nads import catalog
from nads.experiments import EXIT_CODES, KINDS

EXPECTED_IDS = {
    "collapsing-constants",
    "circle-stretch",
    "alternating-inverse",
    "alternating-rotation",
    "shift-zigzag",
    "shift-3periodic",
    "logistic-2periodic",
    "full-shift",
    "identity-interval",
    "shift-logistic-product",
    "tent-map",
}


def test_ids_are_stable():
    assert set(catalog.ids()) == EXPECTED_IDS
    assert catalog.list() == catalog.ids()


def test_unknown_id():
    with pytest.raises(KeyError, match="full-shift"):
        catalog.get("not-a-system")


@pytest.mark.parametrize("entry_id", sorted(EXPECTED_IDS))
def test_entries_are_well_formed(entry_id):
    e = catalog.get(entry_id)
    assert e.id == entry_id and e.description
    assert e.table
    for exp in e.table:
        assert exp.kind in KINDS and exp.expected in EXIT_CODES


def test_family_is_built_fresh():
    a, b = catalog.get("full-shift").family, catalog.get("full-shift").family
    assert a.space.kind == b.space.kind == "symbolic"


def test_product_entry_combines_two_periods():
    fam = catalog.get("shift-logistic-product").family
    assert fam.kind == "product" and fam.space.kind == "product"
    assert [f.period for f in fam.factors] == [3, 2]
