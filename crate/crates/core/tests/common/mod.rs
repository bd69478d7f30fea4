#![allow(dead_code)]

use eggfit::channel::{EggParams, MixtureModel};

/// A published parameter row: label, (omega, lambda, a, b, c), scintillation index.
pub struct Row {
    pub label: &'static str,
    pub p: [f64; 5],
    pub si: f64,
}

impl Row {
    pub fn params(&self) -> EggParams<f64> {
        let [w, l, a, b, c] = self.p;
        EggParams::new(w, l, a, b, c).unwrap()
    }

    pub fn model(&self) -> MixtureModel<f64> {
        MixtureModel::Egg(self.params())
    }
}

const fn row(label: &'static str, p: [f64; 5], si: f64) -> Row {
    Row { label, p, si }
}

/// Bubble level and temperature gradient rows.
pub const TABLE_I: [Row; 8] = [
    row(
        "2.4 L/min, 0.05 C/cm",
        [0.2130, 0.3291, 1.4299, 1.1817, 17.1984],
        0.1484,
    ),
    row(
        "2.4 L/min, 0.10 C/cm",
        [0.2108, 0.2694, 0.6020, 1.2795, 21.1611],
        0.1659,
    ),
    row(
        "2.4 L/min, 0.15 C/cm",
        [0.1807, 0.1641, 0.2334, 1.4201, 22.5924],
        0.1915,
    ),
    row(
        "2.4 L/min, 0.20 C/cm",
        [0.1665, 0.1207, 0.1559, 1.5216, 22.8754],
        0.2178,
    ),
    row(
        "4.7 L/min, 0.05 C/cm",
        [0.4589, 0.3449, 1.0421, 1.5768, 35.9424],
        0.4201,
    ),
    row(
        "4.7 L/min, 0.10 C/cm",
        [0.4539, 0.2744, 0.3008, 1.7053, 54.1422],
        0.4769,
    ),
    row(
        "16.5 L/min, 0.22 C/cm",
        [0.6238, 0.1094, 0.0111, 4.4750, 105.3550],
        1.9328,
    ),
    row(
        "23.6 L/min, 0.22 C/cm",
        [0.7210, 0.1479, 0.0121, 7.4189, 65.6983],
        3.1952,
    ),
];

/// Salty and fresh water at increasing bubble levels.
pub const TABLE_II: [Row; 10] = [
    row("salty BL=0", [1.4684e-23, 0.9853, 1012.6, 0.0344, 2.0541], 2.3408e-4),
    row("salty BL=2.4", [0.1770, 0.4687, 0.7736, 1.1372, 49.1773], 0.1006),
    row("salty BL=4.7", [0.2064, 0.3953, 0.5307, 1.2154, 35.7368], 0.1308),
    row("salty BL=7.1", [0.4344, 0.4747, 0.3935, 1.4506, 77.0245], 0.3111),
    row("salty BL=16.5", [0.4951, 0.1368, 0.0161, 3.2033, 82.1030], 1.1273),
    row("fresh BL=0", [4.0628e-21, 1.0225, 30.8432, 0.6993, 9.5461], 3.6044e-4),
    row("fresh BL=2.4", [0.1953, 0.5273, 3.7291, 1.0721, 30.3214], 0.1088),
    row("fresh BL=4.7", [0.2109, 0.4603, 1.2526, 1.1501, 41.3258], 0.1233),
    row("fresh BL=7.1", [0.3489, 0.4771, 0.4319, 1.4531, 74.3650], 0.3150),
    row("fresh BL=16.5", [0.5117, 0.1602, 0.0075, 2.9963, 216.8356], 1.0409),
];

pub fn all_rows() -> impl Iterator<Item = &'static Row> {
    TABLE_I.iter().chain(TABLE_II.iter())
}

pub fn row1() -> &'static Row {
    &TABLE_I[0]
}

pub fn strong() -> &'static Row {
    &TABLE_I[7]
}

pub fn salty_165() -> &'static Row {
    &TABLE_II[4]
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
