//! Deterministic 2D scene engine in which every element is moved by any inner
//! point, resized or reconfigured by its border, and rotated, all driven by
//! plain pointer-event streams.
//!
//! The pieces, bottom up:
//!
//! * [`geometry`]: points, contours with line and arc pieces, containment.
//! * [`cover`]: the ordered set of sensitive areas that decides what a press
//!   grabs.
//! * [`elements`]: element kinds and their pure edit operations.
//! * [`scene`]: the z-ordered collection plus groups, views, persistence and
//!   SVG output.
//! * [`engine`]: the press/move/release state machine and event logs.
//! * [`apps`]: calculator, function analyser, spot in a labyrinth or on a path.
//! * [`testkit`]: seeded generators and brute-force oracles shared by tests,
//!   fuzzing and benchmarks.

pub mod apps;
pub mod cover;
pub mod elements;
pub mod engine;
pub mod geometry;
pub mod scene;
pub mod testkit;

pub use elements::{Element, ElementId, ElementKind};
pub use engine::{replay, Button, Engine, PointerEvent, Signal};
pub use geometry::{Point, Rect};
pub use scene::{load_scene, save_scene, to_svg, LoadError, Scene};
