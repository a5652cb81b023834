"""
A map of countries between the factor poles
===========================================

Add one unit-loading pole per factor, measure Euclidean distances between
loading vectors, embed them in the plane with SMACOF, and draw the result as
SVG and as a text preview.
"""

# %%
from pathlib import Path

from sciprofile import (add_factor_poles, distance_matrix, extract_factors, load_fixture,
                        render_ascii, render_svg, smacof)

countries = load_fixture("annexB_all").without_world()
model = extract_factors(countries, k=3)
rows, labels = add_factor_poles(model, None)
embedding = smacof(distance_matrix(rows, labels))
print(f"stress-1 {embedding.stress1:.4f} after {embedding.iterations} iterations")

# %%
print(render_ascii(embedding, 72, 28))

# %%
# The SVG colours countries by region and shows full names on hover.
regions = {r.iso2: r.region for r in countries.rows}
names = {r.iso2: r.name for r in countries.rows}
Path("country_map.svg").write_text(render_svg(embedding, regions, names=names), encoding="utf-8")
print("wrote country_map.svg")
