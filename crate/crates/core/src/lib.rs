pub mod cli;
pub mod config;
pub mod geometry;
pub mod predictor;
pub mod protocols;
pub mod sim;
pub mod tracker;
