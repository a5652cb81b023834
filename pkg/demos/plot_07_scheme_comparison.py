"""
Two subject schemes side by side
================================

The bundled variance tables come from the same analysis run on two subject
classifications. Put their explained variance next to each other.
"""

# %%
from sciprofile import compare_schemes, load_fixture

sjr = load_fixture("table2_sjr_variance")
esi = load_fixture("table3_esi_variance")
print(compare_schemes(sjr, esi, top=3, names=("SJR", "ESI")).to_text())
