"""
Deciding observability with the color-change rule
==================================================

A 3-state pattern with one output that sees states 1 and 3 is not
colorable. Adding a second output on state 3 fixes that.
"""

from structobs import PatternMatrix, check_observability, color, combine_m

A = PatternMatrix.from_rows(["0**", "**?", "*0*"])
C = PatternMatrix.from_rows(["*0*"])

M = combine_m(A, C)
print(M.to_text(), end="\n\n")
print("colorable:", color(M).colorable)

###############################################################################
# One extra output on state 3 lets the new sensor node force state 3, then
# the cascade reaches every state.

C2 = PatternMatrix.from_rows(["*0*", "00*"])
state = color(combine_m(A, C2))
for ev in state.trace:
    print(f"round {ev.round}: node {ev.forcer + 1} forces state {ev.forced + 1}")

###############################################################################
# Observability needs the same to hold for the diagonal-modified pattern.

v = check_observability(A, C2)
print("G(M):", v.colorable_M, " G(Mbar):", v.colorable_Mbar, " observable:", v.observable)
