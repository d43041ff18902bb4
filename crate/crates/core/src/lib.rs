pub mod chain_bound;
pub mod corpus;
pub mod nti;
pub mod poly;
pub mod program;
pub mod sim;
