"""Named, parameter-fixed systems with their expected verdicts.

Each entry carries a table of experiments (same vocabulary as the CLI's
config files) together with the outcome the system is known to produce.
``nads --repro <id>`` runs the table and reports whether every row matches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from nads import spaces
from nads import systems as S
from nads.systems import MapFamily


@dataclass(frozen=True)
class Expectation:
    kind: str
    params: dict
    expected: str


@dataclass
class CatalogEntry:
    id: str
    description: str
    build: Callable[[], MapFamily]
    table: list[Expectation] = field(default_factory=list)
    _family: MapFamily | None = field(default=None, repr=False)

    @property
    def family(self) -> MapFamily:
        if self._family is None:
            self._family = self.build()
            self._family.name = self.id
        return self._family


W0, W1 = {"word": "0"}, {"word": "1"}
QUARTER_TURN = math.pi / 4


def _sigma_ball(bits):
    return [{"word": bits}, 0.5]


def _entries() -> list[CatalogEntry]:
    sym, unit = spaces.symbolic(), spaces.interval()
    sigma = S.shift(1)
    logistic2 = lambda: S.periodic_family(unit, [S.logistic(4.0), S.identity()])  # noqa: E731
    return [
        CatalogEntry(
            "collapsing-constants",
            "f_n(x) = 1/2^n on the real line: traces two segments yet is not transitive",
            lambda: S.scheduled_family(spaces.real_line((-5.0, 5.0)), "constant-halving"),
            [
                Expectation("wsp", {"segments": [[0, 2], [8, 10]], "targets": [0.3, -2.0], "eps": 0.1, "gap": 5}, "witnessed"),
                Expectation("property-check", {"property": "transitive", "eps": 0.5, "horizon": 20, "window": True}, "refuted-at-resolution"),
                Expectation("property-check", {"property": "mixing", "eps": 0.5, "horizon": 20, "window": True}, "refuted-at-resolution"),
            ],
        ),
        CatalogEntry(
            "circle-stretch",
            "f_n(theta) = (n+1)/n * theta on the angle lift, so f_1^n(theta) = (n+1) theta: mixing, no WSP witness",
            lambda: S.scheduled_family(spaces.circle(), "circle-stretch"),
            [
                Expectation("property-check", {"property": "mixing", "eps": QUARTER_TURN, "horizon": 60}, "witnessed"),
                Expectation("qsp", {"x1": 0.5, "x2": 3.0, "n": 20, "eps": 0.2}, "witnessed"),
                Expectation(
                    "wsp",
                    {"segments": [[0, 0], [20, 21]], "targets": [0.0, 3.0], "eps": 0.1, "gap": 10, "budget": 2000},
                    "not-found",
                ),
            ],
        ),
        CatalogEntry(
            "alternating-inverse",
            "{sigma, sigma^-1, sigma, ...}: every point has period 2, never transitive",
            lambda: S.periodic_family(sym, [sigma, S.shift(-1)]),
            [
                Expectation("property-check", {"property": "periodic-dense", "eps": 0.5, "period_bound": 4}, "witnessed"),
                Expectation("property-check", {"property": "transitive", "eps": 0.5, "horizon": 20}, "refuted-at-resolution"),
                Expectation("periodicity", {"n": 2, "multiples": 5, "max_word": 8}, "holds"),
                Expectation(
                    "ssp",
                    {"segments": [[0, 0], [4, 4]], "targets": [W0, W1], "eps": 0.5, "gap": 3, "period": 8, "budget": 300},
                    "not-found",
                ),
            ],
        ),
        CatalogEntry(
            "alternating-rotation",
            "{R, R^-1, R, ...} for the rotation R by one radian: periodic points everywhere, not transitive",
            lambda: S.periodic_family(spaces.circle(), [S.rotation(1.0), S.rotation(-1.0)]),
            [
                Expectation("property-check", {"property": "periodic-dense", "eps": 0.5, "period_bound": 4}, "witnessed"),
                Expectation("property-check", {"property": "transitive", "eps": 0.5, "horizon": 20}, "refuted-at-resolution"),
                Expectation("periodicity", {"n": 2, "multiples": 5, "points": 50}, "holds"),
            ],
        ),
        CatalogEntry(
            "shift-zigzag",
            "{sigma, sigma^-1, sigma^2, sigma^-2, ...}: Devaney chaotic, hits only at odd times, not mixing",
            lambda: S.scheduled_family(sym, "shift-zigzag"),
            [
                Expectation(
                    "property-check",
                    {"property": "devaney", "eps": 0.5, "horizon": 30, "delta": 0.25, "eps_perturb": 0.25, "period_bound": 4},
                    "witnessed",
                ),
                Expectation("property-check", {"property": "mixing", "eps": 0.5, "horizon": 40}, "refuted-at-resolution"),
                Expectation("hit-set", {"U": _sigma_ball("0"), "V": _sigma_ball("1"), "horizon": 40, "parity": "odd"}, "holds"),
                Expectation("periodicity", {"n": 2, "multiples": 5, "max_word": 8}, "holds"),
                Expectation("qsp", {"x1": W0, "x2": W1, "n": 12, "eps": 0.5, "budget": 300}, "not-found"),
            ],
        ),
        CatalogEntry(
            "shift-3periodic",
            "3-periodic (sigma, sigma^-2, sigma^2) whose collapse is sigma",
            lambda: S.periodic_family(sym, [sigma, S.shift(-2), S.shift(2)]),
            [
                Expectation("property-check", {"property": "mixing", "eps": 0.5, "horizon": 60}, "witnessed"),
                Expectation(
                    "collapse",
                    {"segments": [[0, 1], [10, 11]], "targets": [W0, W1], "eps": 0.5, "gap": 8, "period": 24},
                    "witnessed",
                ),
                Expectation(
                    "ssp",
                    {"segments": [[0, 2], [30, 32]], "targets": [W0, W1], "eps": 0.5, "gap": 27, "period": 72},
                    "witnessed",
                ),
            ],
        ),
        CatalogEntry(
            "logistic-2periodic",
            "2-periodic (4x(1-x), identity) on [0, 1]",
            logistic2,
            [
                Expectation("property-check", {"property": "mixing", "eps": 0.1, "horizon": 60}, "witnessed"),
                Expectation(
                    "property-check",
                    {"property": "devaney", "eps": 0.1, "horizon": 40, "delta": 0.25, "eps_perturb": 0.05},
                    "witnessed",
                ),
                Expectation("estimate-M", {"eps": 0.2, "horizon": 60, "trials": 100}, "witnessed"),
            ],
        ),
        CatalogEntry(
            "full-shift",
            "autonomous shift sigma on two symbols",
            lambda: S.autonomous(sym, sigma),
            [
                Expectation("property-check", {"property": "mixing", "eps": 0.5, "horizon": 30}, "witnessed"),
                Expectation("property-check", {"property": "devaney", "eps": 0.5, "horizon": 30}, "witnessed"),
                Expectation(
                    "ssp",
                    {"segments": [[0, 3]], "targets": [{"word": "01"}], "eps": 0.25, "gap": 1, "period": 12},
                    "witnessed",
                ),
                Expectation("estimate-M", {"eps": 0.5, "horizon": 40, "trials": 100}, "witnessed"),
                Expectation(
                    "measure-mixing",
                    {"U": _sigma_ball("0"), "V": _sigma_ball("1"), "atom_count": 10, "horizon": 40},
                    "witnessed",
                ),
            ],
        ),
        CatalogEntry(
            "identity-interval",
            "identity on [0, 1]: nothing moves",
            lambda: S.autonomous(unit, S.identity()),
            [
                Expectation("property-check", {"property": "transitive", "eps": 0.2, "horizon": 20}, "refuted-at-resolution"),
                Expectation("property-check", {"property": "mixing", "eps": 0.2, "horizon": 20}, "refuted-at-resolution"),
                Expectation("estimate-M", {"eps": 0.2, "horizon": 40, "trials": 10}, "exhausted"),
                Expectation(
                    "ssp",
                    {"segments": [[0, 0], [3, 3]], "targets": [0.1, 0.9], "eps": 0.2, "gap": 1, "period": 6, "budget": 300},
                    "not-found",
                ),
                Expectation(
                    "measure-mixing",
                    {"U": [0.1, 0.05], "V": [0.9, 0.05], "atom_count": 10, "horizon": 40},
                    "refuted-at-resolution",
                ),
            ],
        ),
        CatalogEntry(
            "shift-logistic-product",
            "product of the 3-periodic shift family and the 2-periodic logistic family",
            lambda: S.product_family(get("shift-3periodic").family, get("logistic-2periodic").family),
            [
                Expectation("qsp", {"x1": [W0, 0.2], "x2": [W1, 0.7], "n": 30, "eps": 0.2}, "witnessed"),
                Expectation(
                    "product",
                    {"segments": [[0, 0], [30, 30]], "targets": [[W0, 0.2], [W1, 0.7]], "eps": 0.2, "gap": 29},
                    "witnessed",
                ),
            ],
        ),
        CatalogEntry(
            "tent-map",
            "autonomous tent map, conjugate to logistic(4) through sin^2(pi x / 2)",
            lambda: S.autonomous(unit, S.tent()),
            [
                Expectation("property-check", {"property": "mixing", "eps": 0.1, "horizon": 16}, "witnessed"),
                Expectation(
                    "conjugate",
                    {
                        "h": {"name": "sin2"},
                        "lipschitz": math.pi,
                        "target_eps": 0.05,
                        "segments": [[0, 0], [5, 5]],
                        "targets": [0.3, 0.6],
                        "gap": 2,
                    },
                    "witnessed",
                ),
            ],
        ),
    ]


_REGISTRY: dict[str, CatalogEntry] = {}


def _load() -> dict[str, CatalogEntry]:
    if not _REGISTRY:
        for e in _entries():
            _REGISTRY[e.id] = e
    return _REGISTRY


def get(entry_id: str) -> CatalogEntry:
    reg = _load()
    if entry_id not in reg:
        raise KeyError(f"unknown catalog id {entry_id!r}; known: {', '.join(reg)}")
    return reg[entry_id]


def ids() -> list[str]:
    return [*_load()]


# the registry API is get(id) / list(); defined last so the builtin stays usable above
list = ids  # noqa: A001
