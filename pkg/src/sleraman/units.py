"""Unit conversions at the package boundary.

Files speak cm^-1 and fs; everything internal is angular frequency (rad/s)
and seconds with hbar = 1.
"""

import math

SPEED_OF_LIGHT = 2.99792458e8  # m/s

#: rad/s per cm^-1
CM_TO_RAD_PER_S = 2.0 * math.pi * SPEED_OF_LIGHT * 100.0
FS = 1e-15
PS = 1e-12


def cm_to_rad(x):
    return x * CM_TO_RAD_PER_S


def rad_to_cm(x):
    return x / CM_TO_RAD_PER_S


def fs_to_s(t):
    return t * FS


def s_to_fs(t):
    return t / FS
