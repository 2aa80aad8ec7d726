//! Deterministic stand-in for the full-order micromodel: a fixed aggregate of
//! bulk and cohesive material points whose volume-averaged stress is the
//! ground truth for every dataset.

mod dataset;
mod teacher;

pub use dataset::{gen_dataset, Dataset, DatasetHeader, PathRecord, DATASET_FORMAT_VERSION};
pub use teacher::{teacher_build, teacher_respond, Calibration, Teacher, TeacherConfig, TeacherResponse};
