use crate::interp::MonotoneCubic;

/// Smooth scalar profiles `f(x)` used to build initial data.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant {
        value: f64,
    },
    /// `offset + amplitude·sin(wavenumber·x + phase)`.
    Sine {
        offset: f64,
        amplitude: f64,
        wavenumber: f64,
        phase: f64,
    },
    /// `offset + amplitude·exp(−((x − center)/width)²)`.
    GaussianBump {
        offset: f64,
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// `offset + amplitude·tanh((x − center)/width)`.
    TanhRamp {
        offset: f64,
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// `offset + amplitude/(1 + ((x − center)/width)²)`.
    Lorentzian {
        offset: f64,
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// Samples joined by a monotone cubic, constant beyond the data.
    Tabulated(MonotoneCubic),
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Constant { value } => *value,
            Profile::Sine {
                offset,
                amplitude,
                wavenumber,
                phase,
            } => offset + amplitude * (wavenumber * x + phase).sin(),
            Profile::GaussianBump {
                offset,
                amplitude,
                center,
                width,
            } => offset + amplitude * (-((x - center) / width).powi(2)).exp(),
            Profile::TanhRamp {
                offset,
                amplitude,
                center,
                width,
            } => offset + amplitude * ((x - center) / width).tanh(),
            Profile::Lorentzian {
                offset,
                amplitude,
                center,
                width,
            } => offset + amplitude / (1.0 + ((x - center) / width).powi(2)),
            Profile::Tabulated(table) => table.eval(x),
        }
    }

    /// Width parameter, if the profile has one; widths must be positive.
    pub fn width(&self) -> Option<f64> {
        match self {
            Profile::GaussianBump { width, .. }
            | Profile::TanhRamp { width, .. }
            | Profile::Lorentzian { width, .. } => Some(*width),
            _ => None,
        }
    }
}
