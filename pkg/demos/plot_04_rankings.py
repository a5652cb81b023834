"""
Rankings and membership from printed loadings
=============================================

The bundled loading table lists 93 countries with a loading on each of the
three factors. Rank them and pick the members of each factor at a loading
of at least 0.8.
"""

# %%
from sciprofile import load_fixture, membership, rank_by_factor
from sciprofile.report import FACTOR_NAMES, membership_table

loadings = load_fixture("annexA_loadings")
for f in (1, 2, 3):
    top = rank_by_factor(loadings, f)[:3]
    print(FACTOR_NAMES[f], top)

# %%
# Membership is monotone in the threshold.
for theta in (0.7, 0.8, 0.9):
    print(theta, [len(membership(loadings, f, theta)) for f in (1, 2, 3)])

# %%
# Countries can be dropped from a factor by hand; the table notes it.
print(membership_table(loadings, excluded={1: ["Lebanon", "Luxembourg"]}).to_text())
