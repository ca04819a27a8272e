pub mod belief;
pub mod error;
pub mod par;
pub mod scalar;
pub mod lp;
pub mod structures;
pub mod fixtures;
pub mod uniqueness;
pub mod disclosure;
pub mod infobounds;
pub mod feasibility;
pub mod welfare;
pub mod design_games;
