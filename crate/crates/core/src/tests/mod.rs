//! Cross-module tests through the public API.
