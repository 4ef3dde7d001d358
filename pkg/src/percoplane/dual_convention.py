"""Pinned dual-graph orientation convention.

Generated by scripts/pin_dual_convention.py: the canonical combination (up
to the documented S_x redundancy) under which the primal connection event
{u -> x} and the dual crossing event {S_x ->* T_x} stand in one fixed
relation for every configuration of every pin graph and every x on the
cycle.  Do not edit by hand; rerun the script to regenerate.
"""

CROSS_LEFT_TO_RIGHT = True
READ_CLOCKWISE = True
S_ARC_FROM_U = True

# Relation realized by the convention above on every tested instance:
# 'holds-complemented' means {u -> x} holds iff {S_x ->* T_x} fails.
REALIZED_VERDICT = "holds-complemented"

# (cross_left_to_right, read_clockwise, s_arc_from_u) -> uniform verdict or None
SEARCH_RESULTS = {
    (False, False, False): None,
    (False, False, True): 'holds-complemented',
    (False, True, False): 'holds-complemented',
    (False, True, True): None,
    (True, False, False): 'holds-complemented',
    (True, False, True): None,
    (True, True, False): None,
    (True, True, True): 'holds-complemented',
}
