pub mod atlas;
pub mod elliptic;
pub mod flow;
pub mod special;
pub mod sweep;
