use alloc::format;

use super::positive;
use crate::{Error, Result};

macro_rules! state_vector {
    (
        $(#[$meta:meta])*
        $name:ident { $($field:ident),+ } positive: [$($pos:ident),+]
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name {
            $(pub $field: f64,)+
        }

        impl $name {
            pub const DIM: usize = [$(stringify!($field)),+].len();

            pub fn new($($field: f64),+) -> Result<Self> {
                let state = $name { $($field),+ };
                state.validate()?;
                Ok(state)
            }

            pub fn validate(&self) -> Result<()> {
                $(positive(stringify!($pos), self.$pos)?;)+
                Ok(())
            }

            pub fn to_array(&self) -> [f64; Self::DIM] {
                [$(self.$field),+]
            }

            pub fn from_slice(v: &[f64]) -> Result<Self> {
                if v.len() != Self::DIM {
                    return Err(Error::precondition(format!(
                        "{} expects {} components, got {}",
                        stringify!($name),
                        Self::DIM,
                        v.len()
                    )));
                }
                let mut it = v.iter().copied();
                Self::new($({ let _ = stringify!($field); it.next().unwrap() }),+)
            }
        }
    };
}

state_vector! {
    /// Eulerian state without heat flux.
    StateE4 { rho, u, theta, sigma } positive: [rho, theta]
}

state_vector! {
    /// Eulerian state with heat flux `q`.
    StateE5 { rho, u, theta, sigma, q } positive: [rho, theta]
}

state_vector! {
    /// Isothermal Eulerian state.
    StateE3 { rho, u, sigma } positive: [rho]
}

state_vector! {
    /// Lagrangian state; `tau` is the specific volume.
    StateL5 { tau, u, theta, sigma, q } positive: [tau, theta]
}
