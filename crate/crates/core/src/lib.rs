//! Static black-peg AB Game and Mastermind strategies: construction,
//! feasibility checking, decoding, necessary-condition audits and exhaustive
//! minimal-size search.

pub mod audit;
pub mod builder;
pub mod decode;
pub mod error;
pub mod game;
pub mod search;
pub mod strategy;
pub mod verify;

pub use audit::{audit, AuditReport, Violation};
pub use builder::{base_table, build_strategy, expected_k, iterated_block, shift_block, BlockPlan};
pub use decode::{decode, structured_decode, DecodeOutcome, DecodeTrace, StructuredOutcome};
pub use error::{Error, Result};
pub use game::{
    black_pegs, enumerate_secrets, signature, AnswerSignature, Code, GameSpec, Question, Secret,
    Variant,
};
pub use search::{
    exists_strategy_of_size, metric_dimension_hamming, min_k, Budget, SearchOptions, SearchReport,
    SizeOutcome,
};
pub use strategy::{Provenance, Strategy, StrategyFile};
pub use verify::{
    classify_all, classify_question, collision_classes, column_removal_feasible, find_collision,
    indistinguishable, is_feasible, missing_colors, relation, remove_column, QuestionClass,
    Relation,
};
