pub mod group;
pub mod graph;
pub mod flow;
pub mod matching;
pub mod pseudoforest;
pub mod ladder;
pub mod constructions;
pub mod generate;
