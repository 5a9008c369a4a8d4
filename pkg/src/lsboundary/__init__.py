"""Length spectra, earthquakes and norms on infinite hyperbolic surfaces
built from pants decompositions."""
from .deformation import EarthquakeError, EarthquakePath, earthquake_path_sample, twist_earthquake
from .holonomy import (HolonomyError, Mat2, TwistConfig, curve_holonomy, curve_length, curve_lengths,
                       geodesic_length, seam_lengths, twisted_trace, twisted_trace_oracle)
from .kernels import BACKEND
from .pants import (Cuff, CurveWord, CurveWordError, FNCoordinates, MarkedSurface, MulticurveLamination,
                    PantsGraph, Segment, Slot, SurfaceSpecError, dependent_cuffs, parse_curve_document,
                    parse_curve_word, parse_lamination, parse_surface_spec, resolve_path, support_of,
                    surface_to_json)
from .spectra import (CurveFamily, LengthSpectrumVector, dls_distance, intersection_number, length_spectrum,
                      ls_norm, normalized_sup_distance, projective_normalize, thurston_norm_bounds)
from .zoo import (K_CAP, ShigaFamily, ZooRule, check_lbound, companion_curve, enumerate_taut_words,
                  make_shiga_family, make_zoo_surface, star_curve)

__version__ = "0.1.0"
