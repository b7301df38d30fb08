pub mod form;
pub mod gen;
pub mod lie;
pub mod oracle;
pub mod report;
pub mod canonical;
pub mod cech;
pub mod transgression;
pub mod qham;
pub mod suites;
