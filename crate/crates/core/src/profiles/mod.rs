//! Approximate wave profiles: the viscous contact wave, smooth rarefactions
//! driven by Burgers solutions, and their composite.

pub mod burgers;
pub mod composite;
pub mod contact;
pub mod rarefaction;

pub use burgers::{BurgersJet, BurgersWave};
pub use composite::{CompositeAnsatz, CompositeJet};
pub use contact::{diffusion_prefactor, solve_contact_profile, ContactJet, ContactProfile, ProfileOptions};
pub use rarefaction::{RarefactionJet, RarefactionWave};
