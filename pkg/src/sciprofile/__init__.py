"""Country scientific subject-profile analysis.

Factor loadings from Q-mode principal components, rankings and threshold
membership, profile-vs-world tables, and 2-D maps of countries with factor
poles.
"""

from .core import (CountryProfile, ProfileMatrix, SubjectScheme, ValidationReport, SCOPUS27,
                   ESI22, WORLD_CODE, specialization_index, validate_profile, world_profile)
from .eigen import EigenResult, jacobi_eigh
from .ingest import (LoadingTable, ParseError, canonicalize_subject, load_fixture, parse_matrix,
                     read_matrix, write_matrix)
from .mds import (Dissimilarity, Embedding, add_factor_poles, classical_mds, distance_matrix,
                  procrustes, smacof, stress1)
from .pca import (FactorModel, PreconditionError, communalities, correlation_matrix,
                  extract_factors, variance_table, varimax)
from .render import MapStyle, render_ascii, render_svg
from .report import compare_schemes, membership, profile_table, rank_by_factor
from .tables import ReportTable

__version__ = "0.1.0"
