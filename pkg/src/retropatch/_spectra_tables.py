"""Built-in spectral data tables.

All curves are tabulated on the standard 5 nm grid over 380-780 nm (81
samples).  The CIE 1931 2-degree color matching functions and the D65
spectral power distribution follow CIE 15:2004 (tables T.2 and T.1).

The white-LED emission spectrum and the sheeting reflectance curves are
documented stand-ins: a two-band phosphor-LED model (blue pump at 450 nm
plus a broad phosphor band at 565 nm, balanced to a near-D65 white point) and logistic/flat film transmission
shapes.  They are adequate for deriving reflection tints but are not
measurements of any specific product; replace them with CSV curves for
quantitative color work.
"""

from __future__ import annotations

WAVELENGTH_MIN_NM = 380.0
WAVELENGTH_MAX_NM = 780.0
WAVELENGTH_STEP_NM = 5.0

# CIE 1931 2-degree standard observer, 5 nm steps: (wavelength, xbar, ybar, zbar).

CIE_1931_CMF = (
    (380, 0.001368, 0.000039, 0.006450),
    (385, 0.002236, 0.000064, 0.010550),
    (390, 0.004243, 0.000120, 0.020050),
    (395, 0.007650, 0.000217, 0.036210),
    (400, 0.014310, 0.000396, 0.067850),
    (405, 0.023190, 0.000640, 0.110200),
    (410, 0.043510, 0.001210, 0.207400),
    (415, 0.077630, 0.002180, 0.371300),
    (420, 0.134380, 0.004000, 0.645600),
    (425, 0.214770, 0.007300, 1.039050),
    (430, 0.283900, 0.011600, 1.385600),
    (435, 0.328500, 0.016840, 1.622960),
    (440, 0.348280, 0.023000, 1.747060),
    (445, 0.348060, 0.029800, 1.782600),
    (450, 0.336200, 0.038000, 1.772110),
    (455, 0.318700, 0.048000, 1.744100),
    (460, 0.290800, 0.060000, 1.669200),
    (465, 0.251100, 0.073900, 1.528100),
    (470, 0.195360, 0.090980, 1.287640),
    (475, 0.142100, 0.112600, 1.041900),
    (480, 0.095640, 0.139020, 0.812950),
    (485, 0.058010, 0.169300, 0.616200),
    (490, 0.032010, 0.208020, 0.465180),
    (495, 0.014700, 0.258600, 0.353300),
    (500, 0.004900, 0.323000, 0.272000),
    (505, 0.002400, 0.407300, 0.212300),
    (510, 0.009300, 0.503000, 0.158200),
    (515, 0.029100, 0.608200, 0.111700),
    (520, 0.063270, 0.710000, 0.078250),
    (525, 0.109600, 0.793200, 0.057250),
    (530, 0.165500, 0.862000, 0.042160),
    (535, 0.225750, 0.914850, 0.029840),
    (540, 0.290400, 0.954000, 0.020300),
    (545, 0.359700, 0.980300, 0.013400),
    (550, 0.433450, 0.994950, 0.008750),
    (555, 0.512050, 1.000000, 0.005750),
    (560, 0.594500, 0.995000, 0.003900),
    (565, 0.678400, 0.978600, 0.002750),
    (570, 0.762100, 0.952000, 0.002100),
    (575, 0.842500, 0.915400, 0.001800),
    (580, 0.916300, 0.870000, 0.001650),
    (585, 0.978600, 0.816300, 0.001400),
    (590, 1.026300, 0.757000, 0.001100),
    (595, 1.056700, 0.694900, 0.001000),
    (600, 1.062200, 0.631000, 0.000800),
    (605, 1.045600, 0.566800, 0.000600),
    (610, 1.002600, 0.503000, 0.000340),
    (615, 0.938400, 0.441200, 0.000240),
    (620, 0.854450, 0.381000, 0.000190),
    (625, 0.751400, 0.321000, 0.000100),
    (630, 0.642400, 0.265000, 0.000050),
    (635, 0.541900, 0.217000, 0.000030),
    (640, 0.447900, 0.175000, 0.000020),
    (645, 0.360800, 0.138200, 0.000010),
    (650, 0.283500, 0.107000, 0.000000),
    (655, 0.218700, 0.081600, 0.000000),
    (660, 0.164900, 0.061000, 0.000000),
    (665, 0.121200, 0.044580, 0.000000),
    (670, 0.087400, 0.032000, 0.000000),
    (675, 0.063600, 0.023200, 0.000000),
    (680, 0.046770, 0.017000, 0.000000),
    (685, 0.032900, 0.011920, 0.000000),
    (690, 0.022700, 0.008210, 0.000000),
    (695, 0.015840, 0.005723, 0.000000),
    (700, 0.011359, 0.004102, 0.000000),
    (705, 0.008111, 0.002929, 0.000000),
    (710, 0.005790, 0.002091, 0.000000),
    (715, 0.004109, 0.001484, 0.000000),
    (720, 0.002899, 0.001047, 0.000000),
    (725, 0.002049, 0.000740, 0.000000),
    (730, 0.001440, 0.000520, 0.000000),
    (735, 0.001000, 0.000361, 0.000000),
    (740, 0.000690, 0.000249, 0.000000),
    (745, 0.000476, 0.000172, 0.000000),
    (750, 0.000332, 0.000120, 0.000000),
    (755, 0.000235, 0.000085, 0.000000),
    (760, 0.000166, 0.000060, 0.000000),
    (765, 0.000117, 0.000042, 0.000000),
    (770, 0.000083, 0.000030, 0.000000),
    (775, 0.000059, 0.000021, 0.000000),
    (780, 0.000042, 0.000015, 0.000000),
)

# CIE standard illuminant D65, relative SPD (100 at 560 nm).
D65_SPD = (
    (380, 49.9755),
    (385, 52.3118),
    (390, 54.6482),
    (395, 68.7015),
    (400, 82.7549),
    (405, 87.1204),
    (410, 91.486),
    (415, 92.4589),
    (420, 93.4318),
    (425, 90.057),
    (430, 86.6823),
    (435, 95.7736),
    (440, 104.865),
    (445, 110.936),
    (450, 117.008),
    (455, 117.41),
    (460, 117.812),
    (465, 116.336),
    (470, 114.861),
    (475, 115.392),
    (480, 115.923),
    (485, 112.367),
    (490, 108.811),
    (495, 109.082),
    (500, 109.354),
    (505, 108.578),
    (510, 107.802),
    (515, 106.296),
    (520, 104.79),
    (525, 106.239),
    (530, 107.689),
    (535, 106.047),
    (540, 104.405),
    (545, 104.225),
    (550, 104.046),
    (555, 102.023),
    (560, 100.0),
    (565, 98.1671),
    (570, 96.3342),
    (575, 96.0611),
    (580, 95.788),
    (585, 92.2368),
    (590, 88.6856),
    (595, 89.3459),
    (600, 90.0062),
    (605, 89.8026),
    (610, 89.5991),
    (615, 88.6489),
    (620, 87.6987),
    (625, 85.4936),
    (630, 83.2886),
    (635, 83.4939),
    (640, 83.6992),
    (645, 81.863),
    (650, 80.0268),
    (655, 80.1207),
    (660, 80.2146),
    (665, 81.2462),
    (670, 82.2778),
    (675, 80.281),
    (680, 78.2842),
    (685, 74.0027),
    (690, 69.7213),
    (695, 70.6652),
    (700, 71.6091),
    (705, 72.979),
    (710, 74.349),
    (715, 67.9765),
    (720, 61.604),
    (725, 65.7448),
    (730, 69.8856),
    (735, 72.4863),
    (740, 75.087),
    (745, 69.3398),
    (750, 63.5927),
    (755, 55.0054),
    (760, 46.4182),
    (765, 56.6118),
    (770, 66.8054),
    (775, 65.0941),
    (780, 63.3828),
)

# Phosphor-converted white LED stand-in (blue pump + phosphor band).
WHITE_LED_SPD = (
    (380, 0.000007),
    (385, 0.000013),
    (390, 0.000024),
    (395, 0.000044),
    (400, 0.000089),
    (405, 0.000250),
    (410, 0.001029),
    (415, 0.004673),
    (420, 0.018891),
    (425, 0.063097),
    (430, 0.170464),
    (435, 0.370128),
    (440, 0.644607),
    (445, 0.899977),
    (450, 1.007576),
    (455, 0.905829),
    (460, 0.656859),
    (465, 0.389882),
    (470, 0.199383),
    (475, 0.103410),
    (480, 0.073380),
    (485, 0.076649),
    (490, 0.094266),
    (495, 0.118882),
    (500, 0.148463),
    (505, 0.182519),
    (510, 0.220728),
    (515, 0.262561),
    (520, 0.307203),
    (525, 0.353543),
    (530, 0.400203),
    (535, 0.445594),
    (540, 0.488001),
    (545, 0.525683),
    (550, 0.556991),
    (555, 0.580490),
    (560, 0.595062),
    (565, 0.600000),
    (570, 0.595062),
    (575, 0.580490),
    (580, 0.556991),
    (585, 0.525683),
    (590, 0.488001),
    (595, 0.445594),
    (600, 0.400203),
    (605, 0.353543),
    (610, 0.307203),
    (615, 0.262561),
    (620, 0.220728),
    (625, 0.182518),
    (630, 0.148448),
    (635, 0.118759),
    (640, 0.093450),
    (645, 0.072329),
    (650, 0.055064),
    (655, 0.041233),
    (660, 0.030370),
    (665, 0.022002),
    (670, 0.015679),
    (675, 0.010989),
    (680, 0.007576),
    (685, 0.005138),
    (690, 0.003427),
    (695, 0.002248),
    (700, 0.001451),
    (705, 0.000921),
    (710, 0.000575),
    (715, 0.000353),
    (720, 0.000213),
    (725, 0.000127),
    (730, 0.000074),
    (735, 0.000043),
    (740, 0.000024),
    (745, 0.000013),
    (750, 0.000007),
    (755, 0.000004),
    (760, 0.000002),
    (765, 0.000001),
    (770, 0.000001),
    (775, 0.000000),
    (780, 0.000000),
)

# Red surface-film reflectance stand-in (long-pass around 600 nm).
RED_FILM_REFLECTANCE = (
    (380, 0.040000),
    (385, 0.040000),
    (390, 0.040000),
    (395, 0.040000),
    (400, 0.040000),
    (405, 0.040000),
    (410, 0.040000),
    (415, 0.040000),
    (420, 0.040000),
    (425, 0.040000),
    (430, 0.040000),
    (435, 0.040001),
    (440, 0.040001),
    (445, 0.040002),
    (450, 0.040002),
    (455, 0.040004),
    (460, 0.040006),
    (465, 0.040009),
    (470, 0.040013),
    (475, 0.040020),
    (480, 0.040030),
    (485, 0.040045),
    (490, 0.040069),
    (495, 0.040105),
    (500, 0.040159),
    (505, 0.040241),
    (510, 0.040365),
    (515, 0.040553),
    (520, 0.040839),
    (525, 0.041272),
    (530, 0.041927),
    (535, 0.042919),
    (540, 0.044417),
    (545, 0.046677),
    (550, 0.050076),
    (555, 0.055165),
    (560, 0.062734),
    (565, 0.073882),
    (570, 0.090066),
    (575, 0.113080),
    (580, 0.144854),
    (585, 0.186982),
    (590, 0.239941),
    (595, 0.302228),
    (600, 0.370000),
    (605, 0.437772),
    (610, 0.500059),
    (615, 0.553018),
    (620, 0.595146),
    (625, 0.626920),
    (630, 0.649934),
    (635, 0.666118),
    (640, 0.677266),
    (645, 0.684835),
    (650, 0.689924),
    (655, 0.693323),
    (660, 0.695583),
    (665, 0.697081),
    (670, 0.698073),
    (675, 0.698728),
    (680, 0.699161),
    (685, 0.699447),
    (690, 0.699635),
    (695, 0.699759),
    (700, 0.699841),
    (705, 0.699895),
    (710, 0.699931),
    (715, 0.699955),
    (720, 0.699970),
    (725, 0.699980),
    (730, 0.699987),
    (735, 0.699991),
    (740, 0.699994),
    (745, 0.699996),
    (750, 0.699998),
    (755, 0.699998),
    (760, 0.699999),
    (765, 0.699999),
    (770, 0.700000),
    (775, 0.700000),
    (780, 0.700000),
)

# White surface-film reflectance stand-in (flat 0.90).
WHITE_FILM_REFLECTANCE = (
    (380, 0.900000),
    (385, 0.900000),
    (390, 0.900000),
    (395, 0.900000),
    (400, 0.900000),
    (405, 0.900000),
    (410, 0.900000),
    (415, 0.900000),
    (420, 0.900000),
    (425, 0.900000),
    (430, 0.900000),
    (435, 0.900000),
    (440, 0.900000),
    (445, 0.900000),
    (450, 0.900000),
    (455, 0.900000),
    (460, 0.900000),
    (465, 0.900000),
    (470, 0.900000),
    (475, 0.900000),
    (480, 0.900000),
    (485, 0.900000),
    (490, 0.900000),
    (495, 0.900000),
    (500, 0.900000),
    (505, 0.900000),
    (510, 0.900000),
    (515, 0.900000),
    (520, 0.900000),
    (525, 0.900000),
    (530, 0.900000),
    (535, 0.900000),
    (540, 0.900000),
    (545, 0.900000),
    (550, 0.900000),
    (555, 0.900000),
    (560, 0.900000),
    (565, 0.900000),
    (570, 0.900000),
    (575, 0.900000),
    (580, 0.900000),
    (585, 0.900000),
    (590, 0.900000),
    (595, 0.900000),
    (600, 0.900000),
    (605, 0.900000),
    (610, 0.900000),
    (615, 0.900000),
    (620, 0.900000),
    (625, 0.900000),
    (630, 0.900000),
    (635, 0.900000),
    (640, 0.900000),
    (645, 0.900000),
    (650, 0.900000),
    (655, 0.900000),
    (660, 0.900000),
    (665, 0.900000),
    (670, 0.900000),
    (675, 0.900000),
    (680, 0.900000),
    (685, 0.900000),
    (690, 0.900000),
    (695, 0.900000),
    (700, 0.900000),
    (705, 0.900000),
    (710, 0.900000),
    (715, 0.900000),
    (720, 0.900000),
    (725, 0.900000),
    (730, 0.900000),
    (735, 0.900000),
    (740, 0.900000),
    (745, 0.900000),
    (750, 0.900000),
    (755, 0.900000),
    (760, 0.900000),
    (765, 0.900000),
    (770, 0.900000),
    (775, 0.900000),
    (780, 0.900000),
)
