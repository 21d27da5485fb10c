"""Tabulated colorimetric data on the 380-730 nm, 10 nm grid.

Values are kept exactly as tabulated (6 significant digits or better). The
illuminant is scaled to 1.0 at 560 nm; only its shape matters because every
use is normalized by the luminance of a perfect reflector.
"""

import numpy as np

# XYZ -> linear sRGB, referenced to D65.
M = np.array([
    [3.243063328, -1.538376194, -0.49893282],
    [-0.968963091, 1.875424508, 0.041543029],
    [0.055683923, -0.204174384, 1.057994536],
])

# CIE 1931 2-degree color matching functions, rows x-bar, y-bar, z-bar.
# Full table precision: x-bar at 620 and 700-730 nm and z-bar at 380-400 nm
# carry digits that shorter copies of the table round away. The rounded
# values shift T by up to 4e-4 (relative) in the red tail.
A_PRIME = np.array([
    [0.001368, 0.004243, 0.01431, 0.04351, 0.13438, 0.2839, 0.34828, 0.3362,
     0.2908, 0.19536, 0.09564, 0.03201, 0.0049, 0.0093, 0.06327, 0.1655, 0.2904,
     0.43345, 0.5945, 0.7621, 0.9163, 1.0263, 1.0622, 1.0026, 0.8544499, 0.6424,
     0.4479, 0.2835, 0.1649, 0.0874, 0.04677, 0.0227, 0.01135916, 0.005790346,
     0.002899327, 0.001439971],
    [0.000039, 0.00012, 0.000396, 0.00121, 0.004, 0.0116, 0.023, 0.038, 0.06,
     0.09098, 0.13902, 0.20802, 0.323, 0.503, 0.71, 0.862, 0.954, 0.99495, 0.995,
     0.952, 0.87, 0.757, 0.631, 0.503, 0.381, 0.265, 0.175, 0.107, 0.061, 0.032,
     0.017, 0.00821, 0.004102, 0.002091, 0.001047, 0.00052],
    [0.006450001, 0.02005001, 0.06785001, 0.2074, 0.6456, 1.3856, 1.74706, 1.77211, 1.6692,
     1.28764, 0.81295, 0.46518, 0.272, 0.1582, 0.07825, 0.04216, 0.0203, 0.00875,
     0.0039, 0.0021, 0.00165, 0.0011, 0.0008, 0.00034, 0.00019, 0.00005, 0.00002,
     0, 0, 0, 0, 0, 0, 0, 0, 0],
])

# CIE illuminant D65, relative to 1.0 at 560 nm.
W_D65 = np.array([
    0.499755, 0.546482, 0.827549, 0.91486, 0.934318, 0.866823, 1.04865,
    1.17008, 1.17812, 1.14861, 1.15923, 1.08811, 1.09354, 1.07802, 1.0479,
    1.07689, 1.04405, 1.04046, 1.00000, 0.963342, 0.95788, 0.886856, 0.900062,
    0.895991, 0.876987, 0.832886, 0.836992, 0.800268, 0.802146, 0.822778,
    0.782842, 0.697213, 0.716091, 0.74349, 0.61604, 0.698856,
])
