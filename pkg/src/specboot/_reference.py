"""Reference values for the simulation tables.

Keys are ``(law, setting, ratio)``.  Tables 1 to 4 store the ground-truth
``(mean, sd, p95)`` and the bootstrap ``((mean, sd), ...)`` of the three
estimates; table 5 stores the interval width in percent of ``r`` as
``(mean, sd)`` and the coverage in percent.

Tables: 1 ``p(T(x^2) - theta)``, 2 ``p(T(x - log x - 1) - theta)``,
3 largest eigenvalue, 4 leading eigengap, 5 stable-rank interval.
"""

REFERENCE_VALUES = {1: {('i', 'S1', 0.5): {'ground': (0.51, 3.31, 6.02), 'boot': ((0.48, 0.24), (3.27, 0.19), (5.85, 0.53))},
     ('i', 'S1', 1.0): {'ground': (0.85, 6.11, 10.87), 'boot': ((0.96, 0.44), (6.09, 0.35), (11.02, 1.0))},
     ('i', 'S1', 1.5): {'ground': (1.44, 9.15, 16.48), 'boot': ((1.47, 0.65), (9.25, 0.51), (16.73, 1.48))},
     ('i', 'S2', 0.5): {'ground': (0.0, 0.11, 0.19), 'boot': ((0.0, 0.01), (0.11, 0.01), (0.19, 0.03))},
     ('i', 'S2', 1.0): {'ground': (0.01, 0.11, 0.19), 'boot': ((0.0, 0.01), (0.11, 0.01), (0.19, 0.02))},
     ('i', 'S2', 1.5): {'ground': (0.0, 0.11, 0.2), 'boot': ((0.0, 0.01), (0.11, 0.01), (0.2, 0.03))},
     ('i', 'S3', 0.5): {'ground': (2.16, 12.88, 23.12), 'boot': ((1.9, 0.88), (12.85, 0.73), (23.2, 2.07))},
     ('i', 'S3', 1.0): {'ground': (4.02, 24.12, 44.03), 'boot': ((3.94, 1.75), (24.27, 1.35), (43.95, 3.82))},
     ('i', 'S3', 1.5): {'ground': (5.8, 36.13, 65.72), 'boot': ((5.8, 2.77), (37.08, 2.2), (67.09, 6.1))},
     ('ii', 'S1', 0.5): {'ground': (3.57, 6.35, 14.09), 'boot': ((3.47, 0.59), (6.36, 0.45), (14.03, 1.29))},
     ('ii', 'S1', 1.0): {'ground': (6.69, 11.93, 26.9), 'boot': ((6.83, 1.0), (11.85, 0.76), (26.51, 2.32))},
     ('ii', 'S1', 1.5): {'ground': (10.25, 18.09, 39.92),
                         'boot': ((10.26, 1.53), (17.99, 1.11), (39.92, 3.25))},
     ('ii', 'S2', 0.5): {'ground': (0.01, 0.12, 0.21), 'boot': ((0.01, 0.01), (0.12, 0.01), (0.2, 0.03))},
     ('ii', 'S2', 1.0): {'ground': (0.0, 0.11, 0.2), 'boot': ((0.01, 0.01), (0.11, 0.01), (0.2, 0.03))},
     ('ii', 'S2', 1.5): {'ground': (0.0, 0.11, 0.19), 'boot': ((0.0, 0.01), (0.11, 0.01), (0.2, 0.03))},
     ('ii', 'S3', 0.5): {'ground': (14.16, 25.27, 56.0),
                         'boot': ((13.67, 2.24), (25.12, 1.76), (55.35, 5.1))},
     ('ii', 'S3', 1.0): {'ground': (27.59, 47.57, 105.75),
                         'boot': ((26.94, 3.72), (47.09, 2.97), (104.85, 8.33))},
     ('ii', 'S3', 1.5): {'ground': (41.49, 71.66, 159.75),
                         'boot': ((40.39, 6.13), (71.59, 4.5), (158.55, 13.38))},
     ('iii', 'S1', 0.5): {'ground': (-0.46, 1.13, 1.44), 'boot': ((-0.47, 0.08), (1.14, 0.07), (1.4, 0.17))},
     ('iii', 'S1', 1.0): {'ground': (-0.95, 2.13, 2.61), 'boot': ((-0.96, 0.14), (2.15, 0.11), (2.58, 0.33))},
     ('iii', 'S1', 1.5): {'ground': (-1.47, 3.12, 3.71), 'boot': ((-1.43, 0.21), (3.17, 0.15), (3.81, 0.45))},
     ('iii', 'S2', 0.5): {'ground': (0.01, 0.11, 0.19), 'boot': ((0.0, 0.01), (0.11, 0.01), (0.19, 0.03))},
     ('iii', 'S2', 1.0): {'ground': (0.0, 0.11, 0.19), 'boot': ((0.0, 0.01), (0.11, 0.01), (0.19, 0.02))},
     ('iii', 'S2', 1.5): {'ground': (0.0, 0.11, 0.19), 'boot': ((0.0, 0.01), (0.11, 0.01), (0.19, 0.03))},
     ('iii', 'S3', 0.5): {'ground': (-1.93, 4.49, 5.41), 'boot': ((-1.85, 0.33), (4.56, 0.25), (5.68, 0.69))},
     ('iii', 'S3', 1.0): {'ground': (-3.89, 8.66, 10.62),
                          'boot': ((-3.78, 0.57), (8.69, 0.48), (10.57, 1.26))},
     ('iii', 'S3', 1.5): {'ground': (-5.62, 13.0, 15.33),
                          'boot': ((-5.7, 0.9), (12.87, 0.68), (15.52, 1.88))}},
 2: {('i', 'S1', 0.3): {'ground': (0.18, 0.35, 0.77), 'boot': ((0.17, 0.03), (0.35, 0.02), (0.74, 0.05))},
     ('i', 'S1', 0.5): {'ground': (0.34, 0.64, 1.4), 'boot': ((0.34, 0.06), (0.63, 0.03), (1.37, 0.09))},
     ('i', 'S1', 0.7): {'ground': (0.6, 1.0, 2.24), 'boot': ((0.58, 0.09), (1.01, 0.05), (2.25, 0.14))},
     ('i', 'S2', 0.3): {'ground': (0.18, 0.83, 1.55), 'boot': ((0.19, 0.22), (0.79, 0.26), (1.49, 0.65))},
     ('i', 'S2', 0.5): {'ground': (0.36, 1.16, 2.25), 'boot': ((0.36, 0.45), (1.11, 0.37), (2.19, 1.05))},
     ('i', 'S2', 0.7): {'ground': (0.59, 1.53, 3.1), 'boot': ((0.62, 0.7), (1.51, 0.44), (3.1, 1.42))},
     ('i', 'S3', 0.3): {'ground': (0.18, 0.86, 1.62), 'boot': ((0.17, 0.06), (0.86, 0.05), (1.59, 0.14))},
     ('i', 'S3', 0.5): {'ground': (0.35, 1.19, 2.27), 'boot': ((0.33, 0.09), (1.19, 0.06), (2.3, 0.19))},
     ('i', 'S3', 0.7): {'ground': (0.55, 1.58, 3.12), 'boot': ((0.58, 0.12), (1.56, 0.08), (3.17, 0.25))},
     ('ii', 'S1', 0.3): {'ground': (1.0, 0.37, 1.62), 'boot': ((1.04, 0.11), (0.37, 0.02), (1.66, 0.12))},
     ('ii', 'S1', 0.5): {'ground': (1.74, 0.65, 2.79), 'boot': ((1.79, 0.17), (0.66, 0.03), (2.87, 0.19))},
     ('ii', 'S1', 0.7): {'ground': (2.56, 1.02, 4.25), 'boot': ((2.64, 0.22), (1.04, 0.05), (4.35, 0.25))},
     ('ii', 'S2', 0.3): {'ground': (1.04, 1.52, 3.54), 'boot': ((1.05, 0.4), (1.51, 0.25), (3.54, 0.81))},
     ('ii', 'S2', 0.5): {'ground': (1.74, 2.02, 5.06), 'boot': ((1.77, 0.7), (2.01, 0.35), (5.09, 1.27))},
     ('ii', 'S2', 0.7): {'ground': (2.54, 2.49, 6.54), 'boot': ((2.54, 0.96), (2.46, 0.41), (6.59, 1.63))},
     ('ii', 'S3', 0.3): {'ground': (1.02, 1.63, 3.78), 'boot': ((1.04, 0.16), (1.6, 0.12), (3.68, 0.36))},
     ('ii', 'S3', 0.5): {'ground': (1.78, 2.15, 5.34), 'boot': ((1.8, 0.22), (2.11, 0.14), (5.31, 0.45))},
     ('ii', 'S3', 0.7): {'ground': (2.57, 2.63, 6.94), 'boot': ((2.61, 0.28), (2.59, 0.16), (6.88, 0.53))},
     ('iii', 'S1', 0.3): {'ground': (-0.11, 0.34, 0.45), 'boot': ((-0.11, 0.02), (0.34, 0.02), (0.45, 0.05))},
     ('iii', 'S1', 0.5): {'ground': (-0.13, 0.62, 0.9), 'boot': ((-0.14, 0.04), (0.62, 0.03), (0.88, 0.08))},
     ('iii', 'S1', 0.7): {'ground': (-0.14, 1.0, 1.49), 'boot': ((-0.09, 0.07), (1.01, 0.04), (1.57, 0.14))},
     ('iii', 'S2', 0.3): {'ground': (-0.12, 0.36, 0.49), 'boot': ((-0.04, 0.12), (0.47, 0.18), (0.74, 0.43))},
     ('iii', 'S2', 0.5): {'ground': (-0.14, 0.64, 0.93), 'boot': ((0.05, 0.29), (0.85, 0.28), (1.45, 0.74))},
     ('iii', 'S2', 0.7): {'ground': (-0.08, 1.01, 1.57), 'boot': ((0.18, 0.45), (1.22, 0.31), (2.19, 0.95))},
     ('iii', 'S3', 0.3): {'ground': (-0.11, 0.38, 0.52), 'boot': ((-0.11, 0.03), (0.38, 0.02), (0.51, 0.05))},
     ('iii', 'S3', 0.5): {'ground': (-0.14, 0.65, 0.93), 'boot': ((-0.14, 0.05), (0.65, 0.03), (0.93, 0.09))},
     ('iii', 'S3', 0.7): {'ground': (-0.07, 1.03, 1.66), 'boot': ((-0.09, 0.07), (1.03, 0.05), (1.6, 0.14))}},
 3: {('i', 'S1', 0.5): {'ground': (2.9, 0.06, 3.0), 'boot': ((2.93, 0.05), (0.06, 0.01), (3.04, 0.07))},
     ('i', 'S1', 1.0): {'ground': (3.96, 0.06, 4.07), 'boot': ((3.99, 0.04), (0.06, 0.01), (4.1, 0.06))},
     ('i', 'S1', 1.5): {'ground': (4.9, 0.06, 5.01), 'boot': ((4.93, 0.04), (0.07, 0.01), (5.05, 0.06))},
     ('i', 'S2', 0.5): {'ground': (0.8, 0.05, 0.89), 'boot': ((0.8, 0.05), (0.05, 0.01), (0.89, 0.06))},
     ('i', 'S2', 1.0): {'ground': (0.8, 0.05, 0.89), 'boot': ((0.8, 0.05), (0.05, 0.01), (0.89, 0.06))},
     ('i', 'S2', 1.5): {'ground': (0.81, 0.05, 0.9), 'boot': ((0.81, 0.05), (0.05, 0.01), (0.9, 0.06))},
     ('i', 'S3', 0.5): {'ground': (5.76, 0.11, 5.95), 'boot': ((5.81, 0.08), (0.12, 0.02), (6.02, 0.11))},
     ('i', 'S3', 1.0): {'ground': (7.91, 0.12, 8.12), 'boot': ((7.98, 0.09), (0.13, 0.02), (8.21, 0.13))},
     ('i', 'S3', 1.5): {'ground': (9.81, 0.13, 10.03), 'boot': ((9.87, 0.1), (0.14, 0.03), (10.12, 0.14))},
     ('ii', 'S1', 0.5): {'ground': (2.96, 0.07, 3.08), 'boot': ((3.03, 0.07), (0.07, 0.01), (3.15, 0.09))},
     ('ii', 'S1', 1.0): {'ground': (4.02, 0.07, 4.14), 'boot': ((4.09, 0.07), (0.07, 0.01), (4.22, 0.09))},
     ('ii', 'S1', 1.5): {'ground': (4.96, 0.07, 5.08), 'boot': ((5.04, 0.06), (0.08, 0.01), (5.17, 0.08))},
     ('ii', 'S2', 0.5): {'ground': (0.8, 0.06, 0.89), 'boot': ((0.8, 0.05), (0.05, 0.01), (0.89, 0.06))},
     ('ii', 'S2', 1.0): {'ground': (0.8, 0.05, 0.89), 'boot': ((0.8, 0.06), (0.05, 0.01), (0.89, 0.06))},
     ('ii', 'S2', 1.5): {'ground': (0.8, 0.05, 0.9), 'boot': ((0.81, 0.06), (0.05, 0.01), (0.9, 0.06))},
     ('ii', 'S3', 0.5): {'ground': (5.88, 0.13, 6.11), 'boot': ((6.03, 0.13), (0.14, 0.02), (6.27, 0.16))},
     ('ii', 'S3', 1.0): {'ground': (8.04, 0.14, 8.26), 'boot': ((8.2, 0.12), (0.15, 0.02), (8.47, 0.15))},
     ('ii', 'S3', 1.5): {'ground': (9.93, 0.14, 10.16), 'boot': ((10.1, 0.12), (0.16, 0.02), (10.37, 0.16))},
     ('iii', 'S1', 0.5): {'ground': (2.88, 0.05, 2.97), 'boot': ((2.89, 0.03), (0.06, 0.01), (2.98, 0.05))},
     ('iii', 'S1', 1.0): {'ground': (3.94, 0.06, 4.04), 'boot': ((3.95, 0.03), (0.06, 0.01), (4.06, 0.05))},
     ('iii', 'S1', 1.5): {'ground': (4.88, 0.06, 4.99), 'boot': ((4.89, 0.03), (0.06, 0.01), (5.0, 0.05))},
     ('iii', 'S2', 0.5): {'ground': (0.8, 0.05, 0.89), 'boot': ((0.8, 0.05), (0.05, 0.01), (0.89, 0.06))},
     ('iii', 'S2', 1.0): {'ground': (0.8, 0.05, 0.89), 'boot': ((0.8, 0.05), (0.05, 0.01), (0.89, 0.06))},
     ('iii', 'S2', 1.5): {'ground': (0.8, 0.05, 0.9), 'boot': ((0.8, 0.05), (0.05, 0.01), (0.89, 0.06))},
     ('iii', 'S3', 0.5): {'ground': (5.72, 0.1, 5.9), 'boot': ((5.74, 0.07), (0.11, 0.02), (5.94, 0.11))},
     ('iii', 'S3', 1.0): {'ground': (7.88, 0.12, 8.08), 'boot': ((7.9, 0.08), (0.12, 0.02), (8.12, 0.13))},
     ('iii', 'S3', 1.5): {'ground': (9.77, 0.12, 9.99), 'boot': ((9.79, 0.08), (0.13, 0.02), (10.01, 0.11))}},
 4: {('i', 'S1', 0.5): {'ground': (0.09, 0.05, 0.18), 'boot': ((0.1, 0.02), (0.06, 0.01), (0.2, 0.05))},
     ('i', 'S1', 1.0): {'ground': (0.1, 0.05, 0.19), 'boot': ((0.1, 0.02), (0.06, 0.01), (0.21, 0.04))},
     ('i', 'S1', 1.5): {'ground': (0.1, 0.06, 0.21), 'boot': ((0.11, 0.02), (0.06, 0.01), (0.22, 0.04))},
     ('i', 'S2', 0.5): {'ground': (0.18, 0.07, 0.3), 'boot': ((0.19, 0.06), (0.06, 0.01), (0.29, 0.07))},
     ('i', 'S2', 1.0): {'ground': (0.18, 0.07, 0.29), 'boot': ((0.18, 0.06), (0.06, 0.01), (0.29, 0.07))},
     ('i', 'S2', 1.5): {'ground': (0.18, 0.07, 0.29), 'boot': ((0.19, 0.06), (0.06, 0.01), (0.3, 0.07))},
     ('i', 'S3', 0.5): {'ground': (0.18, 0.1, 0.35), 'boot': ((0.2, 0.04), (0.11, 0.02), (0.4, 0.08))},
     ('i', 'S3', 1.0): {'ground': (0.19, 0.1, 0.38), 'boot': ((0.22, 0.05), (0.12, 0.03), (0.44, 0.1))},
     ('i', 'S3', 1.5): {'ground': (0.2, 0.11, 0.41), 'boot': ((0.23, 0.05), (0.13, 0.03), (0.47, 0.11))},
     ('ii', 'S1', 0.5): {'ground': (0.1, 0.05, 0.2), 'boot': ((0.11, 0.02), (0.06, 0.01), (0.22, 0.05))},
     ('ii', 'S1', 1.0): {'ground': (0.1, 0.05, 0.2), 'boot': ((0.11, 0.02), (0.06, 0.01), (0.23, 0.05))},
     ('ii', 'S1', 1.5): {'ground': (0.11, 0.06, 0.21), 'boot': ((0.12, 0.02), (0.07, 0.01), (0.24, 0.04))},
     ('ii', 'S2', 0.5): {'ground': (0.18, 0.07, 0.29), 'boot': ((0.18, 0.06), (0.06, 0.01), (0.29, 0.07))},
     ('ii', 'S2', 1.0): {'ground': (0.18, 0.07, 0.29), 'boot': ((0.19, 0.06), (0.06, 0.01), (0.29, 0.07))},
     ('ii', 'S2', 1.5): {'ground': (0.18, 0.07, 0.29), 'boot': ((0.19, 0.06), (0.06, 0.01), (0.3, 0.07))},
     ('ii', 'S3', 0.5): {'ground': (0.19, 0.1, 0.38), 'boot': ((0.22, 0.04), (0.12, 0.02), (0.44, 0.09))},
     ('ii', 'S3', 1.0): {'ground': (0.2, 0.11, 0.41), 'boot': ((0.23, 0.05), (0.13, 0.03), (0.48, 0.1))},
     ('ii', 'S3', 1.5): {'ground': (0.21, 0.11, 0.42), 'boot': ((0.24, 0.04), (0.13, 0.03), (0.49, 0.1))},
     ('iii', 'S1', 0.5): {'ground': (0.09, 0.05, 0.17), 'boot': ((0.09, 0.02), (0.05, 0.01), (0.19, 0.04))},
     ('iii', 'S1', 1.0): {'ground': (0.09, 0.05, 0.19), 'boot': ((0.1, 0.02), (0.05, 0.01), (0.2, 0.03))},
     ('iii', 'S1', 1.5): {'ground': (0.1, 0.06, 0.21), 'boot': ((0.11, 0.01), (0.06, 0.01), (0.21, 0.03))},
     ('iii', 'S2', 0.5): {'ground': (0.18, 0.07, 0.29), 'boot': ((0.19, 0.06), (0.06, 0.01), (0.3, 0.07))},
     ('iii', 'S2', 1.0): {'ground': (0.18, 0.07, 0.29), 'boot': ((0.18, 0.06), (0.06, 0.01), (0.29, 0.07))},
     ('iii', 'S2', 1.5): {'ground': (0.18, 0.07, 0.29), 'boot': ((0.18, 0.06), (0.06, 0.01), (0.29, 0.07))},
     ('iii', 'S3', 0.5): {'ground': (0.17, 0.09, 0.34), 'boot': ((0.19, 0.04), (0.1, 0.02), (0.38, 0.08))},
     ('iii', 'S3', 1.0): {'ground': (0.19, 0.1, 0.38), 'boot': ((0.21, 0.05), (0.11, 0.03), (0.42, 0.1))},
     ('iii', 'S3', 1.5): {'ground': (0.2, 0.11, 0.41), 'boot': ((0.18, 0.06), (0.06, 0.01), (0.29, 0.07))}},
 5: {('i', 'S1', 0.5): {'width': (1.98, 0.12), 'coverage': 94.4},
     ('i', 'S1', 1.0): {'width': (1.96, 0.08), 'coverage': 94.3},
     ('i', 'S1', 1.5): {'width': (1.96, 0.12), 'coverage': 96.2},
     ('i', 'S2', 0.5): {'width': (14.44, 1.07), 'coverage': 93.6},
     ('i', 'S2', 1.0): {'width': (17.04, 1.29), 'coverage': 95.2},
     ('i', 'S2', 1.5): {'width': (18.68, 1.41), 'coverage': 92.4},
     ('i', 'S3', 0.5): {'width': (1.98, 0.12), 'coverage': 92.2},
     ('i', 'S3', 1.0): {'width': (1.98, 0.11), 'coverage': 95.2},
     ('i', 'S3', 1.5): {'width': (1.97, 0.12), 'coverage': 95.6},
     ('ii', 'S1', 0.5): {'width': (2.07, 0.13), 'coverage': 95.8},
     ('ii', 'S1', 1.0): {'width': (2.0, 0.12), 'coverage': 93.2},
     ('ii', 'S1', 1.5): {'width': (1.98, 0.12), 'coverage': 95.4},
     ('ii', 'S2', 0.5): {'width': (14.6, 1.1), 'coverage': 95.0},
     ('ii', 'S2', 1.0): {'width': (17.08, 1.24), 'coverage': 95.6},
     ('ii', 'S2', 1.5): {'width': (18.6, 1.36), 'coverage': 93.6},
     ('ii', 'S3', 0.5): {'width': (2.06, 0.13), 'coverage': 94.8},
     ('ii', 'S3', 1.0): {'width': (2.01, 0.12), 'coverage': 94.6},
     ('ii', 'S3', 1.5): {'width': (1.98, 0.12), 'coverage': 95.8},
     ('iii', 'S1', 0.5): {'width': (1.97, 0.13), 'coverage': 95.0},
     ('iii', 'S1', 1.0): {'width': (1.96, 0.08), 'coverage': 94.7},
     ('iii', 'S1', 1.5): {'width': (1.96, 0.12), 'coverage': 95.4},
     ('iii', 'S2', 0.5): {'width': (14.43, 1.09), 'coverage': 95.2},
     ('iii', 'S2', 1.0): {'width': (16.98, 1.25), 'coverage': 94.8},
     ('iii', 'S2', 1.5): {'width': (18.61, 1.48), 'coverage': 95.4},
     ('iii', 'S3', 0.5): {'width': (1.98, 0.12), 'coverage': 95.2},
     ('iii', 'S3', 1.0): {'width': (1.97, 0.12), 'coverage': 94.0},
     ('iii', 'S3', 1.5): {'width': (1.97, 0.12), 'coverage': 93.4}}}
