"""Reusable analysis kernels: they only know their own overlay types."""

from .graph import (
    Component,
    DependencyGraph,
    SccPartition,
    condensation,
    nontrivial_sccs,
    render_dot,
    scc,
)
from .scope import (
    Declaration,
    RootScope,
    Scope,
    ScopeTree,
    ShadowFinding,
    link_inherited,
    shadowed,
    variable_shadowings,
)

__all__ = [
    "Component",
    "DependencyGraph",
    "SccPartition",
    "condensation",
    "nontrivial_sccs",
    "render_dot",
    "scc",
    "Declaration",
    "RootScope",
    "Scope",
    "ScopeTree",
    "ShadowFinding",
    "link_inherited",
    "shadowed",
    "variable_shadowings",
]
