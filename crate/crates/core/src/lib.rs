pub mod algebra;
pub mod bounds;
pub mod field;
pub mod instability;
pub mod planners;
pub mod spaces;
