"""
Country subject profiles
========================

Load the bundled per-factor country tables, check them, and see which
subject areas each country over- or under-weights relative to the world.
"""

# %%
# A profile matrix has one row per country and one column per subject area.
# Values are percentages of the country's own output; the world row is the
# reference profile.
import numpy as np

from sciprofile import SCOPUS27, load_fixture, specialization_index, validate_profile

agri = load_fixture("annexB_f3")
print(len(agri), "rows,", len(agri.scheme), "areas, scheme", agri.scheme.name)

# %%
# Validation never raises; it lists errors (which reject the matrix) and
# warnings. Rows that had a cell missing in the source are flagged.
report = validate_profile(agri)
print("\n".join(report.lines()))
print("accepted:", report.ok)

# %%
# The specialization index divides each share by the world share.
world = agri.row("WD")
area = "Agricultural and Biological Sciences"
for code in agri.without_world().codes:
    ratio = specialization_index(agri.row(code), world)
    print(f"{code}  {agri.row(code).share(area, SCOPUS27):5.1f}%  x{ratio[SCOPUS27.index(area)]:.2f}")

# %%
# Which areas does the Philippines lean on most?
ph = specialization_index(agri.row("PH"), world)
top = np.argsort(-ph)[:3]
print([(SCOPUS27.areas[i], round(float(ph[i]), 2)) for i in top])
