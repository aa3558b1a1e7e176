"""Simplify path expressions with the identity rule set.

Three worked examples: collapsing a redundant self-loop filter inside a
no-coauthor citation query, reusing the social-science-journal computation
on both ends of a citation chain, and factoring a shared filter out of a
weighted merge. Each prints the full derivation with the rule that
justifies every step.
"""

from pathweave import format_expr, parse, simplify
from pathweave.rewrite import derivation_table

EXAMPLES = {
    "citation without coauthors or self-loops": (
        "A[authored] . A[cites] . A[authored]' "
        "& not(clip(A[authored] . A[authored]' & not(I))) & not(I)"
    ),
    "social-science journal citations": (
        "(vout(C(socsci) & A[category]) & A[contains]) . A[cites] "
        ". (A[contains]' & vin(R(socsci) & A[category]'))"
    ),
    "weighted collaboration merge": (
        "0.6 * (A[authored] . A[authored]' & not(I)) + "
        "0.4 * (A[developed] . A[developed]' & not(I))"
    ),
}

for title, source in EXAMPLES.items():
    start = parse(source)
    simplified, trace = simplify(start)
    print(f"== {title}")
    width = max(len(r) for r, _ in derivation_table(start, trace))
    for idx, (rendered, why) in enumerate(derivation_table(start, trace)):
        lead = "   " if idx == 0 else " = "
        print(f"{lead}{rendered.ljust(width)}  | {why}")
    print(f" final: {format_expr(simplified)}\n")
