pub mod cylinder;
pub mod deformation;
pub mod delaunay;
pub mod geom;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod orbit;
pub mod render;
pub mod report;
pub mod saddle;
pub mod scalar;
pub mod surface;
pub mod trace;
pub mod triangulate;
