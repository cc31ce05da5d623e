from .directions import DirectionClass, direction_canonical, g_map
from .framed import CirclePoint, FramedFMPoint, embed_circle, framed_compose, framed_sigma, framed_unit
from .points import (
    FMPoint,
    circ_i,
    compose,
    coordinates,
    coordinates_recursive,
    point_eq,
    point_from_config,
    relabel,
    rotate,
    sigma_act,
    unit,
)
