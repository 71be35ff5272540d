"""Exact combinatorial dimensions and covering numbers of finite real-valued classes."""

__version__ = "0.1.0"

from .core import (STAR, Measure, PartialClass, SampledClass, SchemaError, class_from_dict,
                   class_to_dict, discretize_class, load_class, restrict, save_class)
from .dims import (BudgetExceeded, DimResult, ShatterCertificate, check_certificate, faat_dim,
                   fat_dim, fat_via_shift_scan, shatter_decision, vc_dim, vc_dim_partial)
from .compose import MaxSpec, hinge_loss_class, k_fold_max, shift_class, sign_threshold_class
from .covering import MetricSpec, covering_number, maurey_cover, verify_product_bound
from .disambig import (Disambiguation, greedy_disambiguation, min_vc_disambiguation_exact,
                       singleton_disambiguation)
from .affine import AffineSpec, halfspace_union_shatter_search, simplex_shatter_witness
from .bounds import BoundParams, evaluate_bound
