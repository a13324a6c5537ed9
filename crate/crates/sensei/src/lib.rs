pub mod assessment;
pub mod fml;
pub mod ingest;
