//! The user guide, one module per book chapter.
//!
//! The guide's sources live in `book/` at the repository root and render
//! with `mdbook build book`. Each module below includes its chapter
//! verbatim, so every Rust snippet printed in the book compiles and runs
//! as a documentation test — the numbers in the prose are the numbers
//! the code produces, enforced by `cargo test`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/channels-and-feedback.md")]
pub mod channels_and_feedback {}

#[doc = include_str!("../../../book/src/delay-and-power.md")]
pub mod delay_and_power {}

#[doc = include_str!("../../../book/src/resource-control.md")]
pub mod resource_control {}

#[doc = include_str!("../../../book/src/monte-carlo.md")]
pub mod monte_carlo {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
