/// First-order radio model: `E_tx = E_elec * b + eps_amp * b * d^2`,
/// `E_rx = E_elec * b`, with `b` in bits and `d` in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioModel {
    /// Electronics energy, J/bit.
    pub e_elec: f64,
    /// Amplifier energy, J/bit/m^2.
    pub eps_amp: f64,
}

impl Default for RadioModel {
    fn default() -> Self {
        Self { e_elec: 50e-9, eps_amp: 100e-12 }
    }
}

impl RadioModel {
    pub fn tx_energy(&self, bytes: u64, distance_m: f64) -> f64 {
        let bits = bytes as f64 * 8.0;
        self.e_elec * bits + self.eps_amp * bits * distance_m * distance_m
    }

    pub fn rx_energy(&self, bytes: u64) -> f64 {
        self.e_elec * bytes as f64 * 8.0
    }
}
