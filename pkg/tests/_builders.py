"""Model builders for tests: a mutation helper over raw trees, a seeded
random-model generator (for the deterministic acceptance sweep), and
hypothesis strategies built on top of it."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from stpasec.model import LoopElement, MissionModel, UcaCategory
from stpasec.resolver import raw_from_model, resolve
from stpasec.syntax import (
    RawAction,
    RawConstraint,
    RawHazard,
    RawLevel,
    RawLoss,
    RawModel,
    RawScenario,
    RawUca,
    Ref,
)

TEXT_ALPHABET = (
    "abcdefghij ABCDE 0123456789"
    + "éü—’"  # exercise UTF-8
    + '"\\\n#{}[]|,:/'  # exercise escaping in every emitter
)


def rebuild(model: MissionModel, **changes) -> MissionModel:
    """Re-resolve a model with some raw groups replaced. Keyword names match
    RawModel fields (losses, hazards, levels, actions, constraints, scenarios)."""
    raw = raw_from_model(model)
    fields = {
        "mission_name": raw.mission_name,
        "mission_statement": raw.mission_statement,
        "system_description": raw.system_description,
        "losses": raw.losses,
        "hazards": raw.hazards,
        "levels": raw.levels,
        "actions": raw.actions,
        "constraints": raw.constraints,
        "scenarios": raw.scenarios,
    }
    fields.update(changes)
    result = resolve(RawModel(**fields))
    assert result.ok, result.diagnostics
    return result.model


def drop_uca(model: MissionModel, action_id: str, category: UcaCategory) -> MissionModel:
    raw = raw_from_model(model)
    actions = tuple(
        RawAction(
            a.id,
            a.title,
            a.source,
            a.target,
            tuple(u for u in a.ucas if u.category is not category),
        )
        if a.id.name == action_id
        else a
        for a in raw.actions
    )
    return rebuild(model, actions=actions)


def set_uca(model: MissionModel, action_id: str, uca: RawUca) -> MissionModel:
    """Replace or add the (action, category) cell."""
    raw = raw_from_model(model)
    actions = tuple(
        RawAction(
            a.id,
            a.title,
            a.source,
            a.target,
            tuple(u for u in a.ucas if u.category is not uca.category) + (uca,),
        )
        if a.id.name == action_id
        else a
        for a in raw.actions
    )
    return rebuild(model, actions=actions)


def random_model(rng: random.Random) -> MissionModel:
    """A random valid model with at most ~50 elements."""

    def text() -> str:
        length = rng.randint(0, 24)
        return "".join(rng.choice(TEXT_ALPHABET) for _ in range(length))

    n_losses = rng.randint(1, 5)
    priorities = list(range(1, n_losses + 1))
    rng.shuffle(priorities)
    losses = tuple(
        RawLoss(Ref(f"L{i + 1}"), priorities[i], text()) for i in range(n_losses)
    )

    n_hazards = rng.randint(0, 6)
    hazards = tuple(
        RawHazard(
            Ref(f"H{i + 1}"),
            text(),
            text(),
            tuple(
                Ref(f"L{k + 1}")
                for k in sorted(rng.sample(range(n_losses), rng.randint(1, n_losses)))
            ),
        )
        for i in range(n_hazards)
    )

    n_levels = rng.randint(1, 6)
    has_environment = rng.random() < 0.7 and n_levels >= 2
    levels = tuple(
        RawLevel(
            Ref(f"lvl{i}"),
            text(),
            is_environment=(has_environment and i == n_levels - 1),
        )
        for i in range(n_levels)
    )
    non_env = n_levels - (1 if has_environment else 0)

    actions = []
    if non_env >= 2:
        for i in range(rng.randint(0, 5)):
            source = rng.randint(0, non_env - 2)
            ucas = []
            for category in UcaCategory:
                roll = rng.random()
                if roll < 0.35:
                    continue  # leave a coverage gap
                if roll < 0.55 or not hazards:
                    ucas.append(RawUca(category, (), text(), justified_absent=True))
                else:
                    cited = sorted(
                        rng.sample(range(n_hazards), rng.randint(1, min(3, n_hazards)))
                    )
                    ucas.append(
                        RawUca(category, tuple(Ref(f"H{k + 1}") for k in cited), text())
                    )
            actions.append(
                RawAction(
                    Ref(f"CA{i + 1}.{rng.randint(1, 9)}" if rng.random() < 0.5 else f"CA{i + 1}"),
                    text(),
                    Ref(f"lvl{source}"),
                    Ref(f"lvl{source + 1}"),
                    tuple(ucas),
                )
            )
    actions = tuple(actions)

    constraints = tuple(
        RawConstraint(Ref(f"SC{i + 1}"), action.id, text())
        for i, action in enumerate(actions)
        if rng.random() < 0.6
    )

    live = [
        (action.id.name, uca.category)
        for action in actions
        for uca in action.ucas
        if not uca.justified_absent
    ]
    scenarios = []
    if live:
        for i in range(rng.randint(0, 3)):
            action_id, category = rng.choice(live)
            scenarios.append(
                RawScenario(
                    Ref(f"S{i + 1}"),
                    Ref(action_id),
                    category,
                    rng.choice(list(LoopElement)),
                    text(),
                    text(),
                )
            )

    result = resolve(
        RawModel(
            mission_name=text(),
            mission_statement=text(),
            system_description=text(),
            losses=losses,
            hazards=hazards,
            levels=levels,
            actions=actions,
            constraints=constraints,
            scenarios=tuple(scenarios),
        )
    )
    assert result.ok, result.diagnostics
    return result.model


@st.composite
def mission_models(draw) -> MissionModel:
    """Hypothesis wrapper over the seeded generator (shrinks on the seed)."""
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_model(random.Random(seed))
