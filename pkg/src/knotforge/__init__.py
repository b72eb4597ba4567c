"""knotforge: knot diagrams, certified unknotting checks and strong trivializers."""

from __future__ import annotations

__version__ = "0.1.0"

from .diagram import *  # noqa: F401,F403
from .diagram import drop_components  # noqa: F401
from .gamma import (  # noqa: F401
    ArcSystem,
    BrunnianReport,
    GammaInstance,
    base_system,
    brunnian_check,
    completed_link,
    double_arc,
    gamma,
    realize,
    system,
)
from .invariants import (  # noqa: F401
    CapExceeded,
    GenusBracket,
    alexander,
    determinant,
    genus_bracket,
    jones,
    kauffman_bracket,
    seifert_circles,
)
from .laurent import LaurentPoly  # noqa: F401
from .oracle import Verdict, classify  # noqa: F401
from .rmoves import Move, MoveTrace, SearchBudget, apply_move, enumerate_moves, simplify  # noqa: F401
from .trivializer import (  # noqa: F401
    AuditResult,
    TrivializerReport,
    audit_bound,
    search_trivializers,
    verify_trivializer,
)
