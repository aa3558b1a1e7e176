"""Build a small scholarly multi-relational network and traverse typed paths.

Two humans write three articles; one article cites another; a journal
contains two of them and carries a subject category. Composing slices with
matrix products and filters turns this labeled structure into ordinary
weighted adjacency matrices.
"""

from pathweave import evaluate, export_tsv, format_expr, ingest_triples, parse

triples = [
    ("h1", "authored", "a1"),
    ("h1", "authored", "a2"),
    ("h2", "authored", "a2"),
    ("h2", "authored", "a3"),
    ("a1", "cites", "a3"),
    ("j1", "contains", "a1"),
    ("j1", "contains", "a3"),
    ("j1", "category", "s1"),
]

tensor = ingest_triples(triples)
print(f"tensor: {tensor.n} vertices, {tensor.m} labeled slices {sorted(tensor.labels)}")

# Who has cited whom, via their articles? Follow authored, then cites, then
# authored backwards.
has_cited = parse("A[authored] . A[cites] . A[authored]'")
print("\nhas-cited paths:", format_expr(has_cited))
print(export_tsv(evaluate(has_cited, tensor), tensor.vertices.names), end="")

# Coauthorship: out along authored and back, minus the trip back to yourself.
coauthor = parse("A[authored] . A[authored]' & not(I)")
print("\ncoauthorship:", format_expr(coauthor))
print(export_tsv(evaluate(coauthor, tensor), tensor.vertices.names), end="")

# Entries count paths: h1 and h2 share one article, so weight 1 each way.
