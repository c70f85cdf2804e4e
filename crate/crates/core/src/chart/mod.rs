//! Chart ingestion: ISO 8211 container parsing, S-57 coordinate extraction,
//! and the JSON obstacle document consumed by the planner.

pub mod document;
pub mod iso8211;
pub mod s57;

pub use document::{load_obstacle_document, DocumentError, Extent, GeoPoint, GeoPolygon, ObstacleDocument};
pub use iso8211::{
    encode_record, parse_directory, parse_file, parse_leader, parse_record, DirectoryEntry, EntryMap, FileError,
    Iso8211Error, LogicalRecord, RecordLeader,
};
pub use s57::{dataset_comf, extract_coordinates, s57_to_obstacles, S57Error, DEFAULT_COMF};
