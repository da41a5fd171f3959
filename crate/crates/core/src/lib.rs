//! Direct-speech (DS) annotation toolkit for French narrative text.
//!
//! The crate is organised around a single currency: one binary [`Label`] per
//! token of a [`Document`]. Everything else either produces such a sequence
//! (the tokenizer plus the marker-based detectors in [`detect`]), rewrites it
//! ([`clause`]), or scores it against a reference ([`metrics`], [`zonemap`]).
//!
//! ```
//! use aads_core::{detect, metrics, textproc};
//!
//! let doc = textproc::tokenize_document("ch1", "« Oui » dit-il.\n— Non !");
//! let pred = detect::detect_multi_marker(&doc, &detect::MarkerInventory::default(), true);
//! let f = metrics::token_prf(&pred, &pred).unwrap();
//! assert_eq!(f.f1, 1.0);
//! ```

pub mod clause;
pub mod detect;
pub mod error;
pub mod formats;
pub mod metrics;
pub mod model;
pub mod textproc;
pub mod zonemap;

pub use error::{Error, Result};
pub use model::{Document, Label, LabelSeq, Sentence, Span, Token};
