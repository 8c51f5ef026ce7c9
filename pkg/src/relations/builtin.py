"""
The five Boolean formal models of analogy, as 0/1 matrices whose columns are the
quadruples (a, b, c, d). Row i holds coordinate i.
"""
from typing import Dict

from src.relations.relations import Relation, parse_relation

BUILTIN_MATRICES: Dict[str, str] = {
    # a = b implies c = d
    "R1": """
        0 1 0 1 1 0 1 0 0 1 0 1
        0 0 1 1 0 1 0 1 0 0 1 1
        0 0 0 0 1 1 0 0 1 1 1 1
        0 0 0 0 0 0 1 1 1 1 1 1
    """,
    "R2": """
        0 1 0 1 1 0 0 1
        0 0 1 1 0 1 0 1
        0 0 0 0 1 0 1 1
        0 0 0 0 0 1 1 1
    """,
    "R3": """
        0 1 1 0 0 1 0 1
        0 1 0 1 0 0 1 1
        0 0 1 0 1 1 1 1
        0 0 0 1 1 1 1 1
    """,
    # Miclet and Prade
    "R4": """
        0 1 1 0 0 1
        0 1 0 1 0 1
        0 0 1 0 1 1
        0 0 0 1 1 1
    """,
    # Klein: a + b = c + d
    "R5": """
        0 1 1 0 1 0 0 1
        0 1 0 1 0 1 0 1
        0 0 1 1 0 0 1 1
        0 0 0 0 1 1 1 1
    """,
}


def builtin_relations() -> Dict[str, Relation]:
    return {name: parse_relation(text) for name, text in BUILTIN_MATRICES.items()}
