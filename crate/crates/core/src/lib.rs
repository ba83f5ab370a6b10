pub mod corpus;
pub mod fraenkel;
pub mod model;
pub mod par;
pub mod schemas;
pub mod symmetry;
pub mod syntax;
