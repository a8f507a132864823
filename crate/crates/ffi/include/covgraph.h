#ifndef COVGRAPH_H
#define COVGRAPH_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Which end of a walk the lifting anchor sits at.
typedef enum CgEnd {
  CG_END_SOURCE = 0,
  CG_END_RANGE = 1,
} CgEnd;

typedef enum CgStatus {
  CG_STATUS_OK = 0,
  CG_STATUS_NULL_POINTER = 1,
  CG_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON, schema violations, unknown names, non-coverings.
  CG_STATUS_INVALID_INPUT = 3,
  // A computed certificate did not verify.
  CG_STATUS_CHECK_FAILED = 4,
  CG_STATUS_INTERNAL = 5,
} CgStatus;

// A validated directed multigraph.
typedef struct CgGraph CgGraph;

// A graph morphism between two validated graphs.
typedef struct CgMorphism CgMorphism;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a graph document. On success `*out` owns a handle to release with
// `cg_graph_free`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum CgStatus cg_graph_from_json(const char *json, struct CgGraph **out);

// # Safety
// `graph` must come from `cg_graph_from_json` and not be freed yet, or be null.
void cg_graph_free(struct CgGraph *graph);

// # Safety
// `graph` must be a live handle and `out` writable.
enum CgStatus cg_graph_vertex_count(const struct CgGraph *graph, size_t *out);

// # Safety
// `graph` must be a live handle and `out` writable.
enum CgStatus cg_graph_edge_count(const struct CgGraph *graph, size_t *out);

// # Safety
// `graph` must be a live handle and `out` writable.
enum CgStatus cg_graph_is_connected(const struct CgGraph *graph, bool *out);

// Graphviz text for the graph, named `name`.
//
// # Safety
// `graph` must be a live handle, `name` a NUL-terminated string and `out`
// writable. Release `*out` with `cg_string_free`.
enum CgStatus cg_graph_to_dot(const struct CgGraph *graph, const char *name, char **out);

// Parses a morphism document (domain, codomain and both maps).
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable. Release the
// handle with `cg_morphism_free`.
enum CgStatus cg_morphism_from_json(const char *json, struct CgMorphism **out);

// # Safety
// `morphism` must come from `cg_morphism_from_json` and not be freed yet, or be null.
void cg_morphism_free(struct CgMorphism *morphism);

// Number of sheets of a covering. Fails with `InvalidInput` when the
// morphism is not a covering or the graphs are not connected.
//
// # Safety
// `morphism` must be a live handle and `out` writable.
enum CgStatus cg_cover_sheets(const struct CgMorphism *morphism, size_t *out);

// Lifts a walk in the codomain, written like `"x y' x"` or `"@u"`, through
// the covering. The lift starts (or ends, per `end`) at the vertex `anchor`
// of the domain; `*out` receives the lifted walk in the same syntax.
//
// # Safety
// `morphism` must be a live handle, `walk` and `anchor` NUL-terminated
// strings and `out` writable. Release `*out` with `cg_string_free`.
enum CgStatus cg_cover_lift(const struct CgMorphism *morphism,
                            const char *walk,
                            const char *anchor,
                            enum CgEnd end,
                            char **out);

// Reconstructs a covering as a skew product based at the domain vertex
// `base` and writes the reconstruction document as JSON. Returns
// `CheckFailed` (with the document still written) when a certificate fails.
//
// # Safety
// `morphism` must be a live handle, `base` a NUL-terminated string and
// `out` writable. Release `*out` with `cg_string_free`.
enum CgStatus cg_reconstruct_json(const struct CgMorphism *morphism, const char *base, char **out);

// Builds the relative skew product of a graph, a labelling and a subgroup,
// each given as a JSON document, and writes the skew product document. A
// labelling that names its graph by path has that path read relative to
// the working directory.
//
// # Safety
// The three documents must be NUL-terminated strings and `out` writable.
// Release `*out` with `cg_string_free`.
enum CgStatus cg_skew_json(const char *graph_json,
                           const char *labelling_json,
                           const char *subgroup_json,
                           char **out);

// The message for the most recent failure on this thread, or null if none.
// The pointer stays valid until the next failing call on the same thread.
const char *cg_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed yet.
void cg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COVGRAPH_H */
