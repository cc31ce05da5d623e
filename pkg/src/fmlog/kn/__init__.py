from .blowup import ChartSection, KNMap, bu_fiber, bu_membership, kn_map_chart, sphere_samples
from .campaigns import (
    circle_split_verify,
    hopf_verify,
    kn_functoriality,
    kn_order_independence,
    s1_action_verify,
    s2_example,
    strict_cartesian_verify,
)
