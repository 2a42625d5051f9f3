//! States, GNS representations and representations on Kreĭn spaces.

mod construction;
mod gelfand;
mod krein_rep;
mod state;

pub use construction::{gns, null_ideal_check, GnsRepresentation};
pub use gelfand::{direct_sum, gelfand_naimark, vector_states};
pub use krein_rep::{represent_krein_algebra, represent_krein_category, KreinRepresentation};
pub use state::{verify_state, CategoryState};
