"""
Measurements built on the algebra package: niceness and relation searches,
point-curve incidences, image sets and deficiency, seeded set sampling and
the report record shared by the expansion runs.
"""
