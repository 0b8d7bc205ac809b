#ifndef CCLAB_H
#define CCLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum CclabStatus {
  CCLAB_STATUS_OK = 0,
  CCLAB_STATUS_NULL_POINTER = 1,
  CCLAB_STATUS_INVALID_UTF8 = 2,
  CCLAB_STATUS_PARSE_ERROR = 3,
  CCLAB_STATUS_UNKNOWN_KEY = 4,
  // `R` is not a finite value at the requested point.
  CCLAB_STATUS_NOT_FINITE = 5,
  CCLAB_STATUS_ANALYSIS_FAILED = 6,
  CCLAB_STATUS_DATA_UNAVAILABLE = 7,
  // A Rust panic was caught at the boundary.
  CCLAB_STATUS_INTERNAL = 8,
} CclabStatus;

// Opaque handle to a parsed planar system.
typedef struct CclabSystem CclabSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread; empty if none. The pointer stays valid
// until the next failing call on the same thread and must not be freed.
const char *cclab_last_error_message(void);

// Parses a system definition (`vars: x y`, `dx = ...`, `dy = ...`).
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum CclabStatus cclab_system_parse(const char *text, struct CclabSystem **out);

// Loads a built-in system by key (`s1`, `s1a`, `s2`, `center`).
//
// # Safety
// `key` must be a NUL-terminated string and `out` a valid pointer.
enum CclabStatus cclab_system_from_catalogue(const char *key, struct CclabSystem **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `sys` must be null or a handle obtained from this library that has not been freed.
void cclab_system_free(struct CclabSystem *sys);

// Total degree of the system.
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum CclabStatus cclab_system_degree(const struct CclabSystem *sys, int64_t *out);

// Exact `R` at a rational point given as strings (`"3"`, `"-1/4"`); the value is written as
// a newly allocated string `"p/q"`.
//
// # Safety
// `x`, `y` must be NUL-terminated strings, `sys` a live handle and `out` a valid pointer.
enum CclabStatus cclab_curvature_at_exact(const struct CclabSystem *sys,
                                          const char *x,
                                          const char *y,
                                          char **out);

// `R` at a floating-point location, evaluated exactly at the binary value of `(x, y)` and
// rounded to the nearest double.
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum CclabStatus cclab_curvature_at(const struct CclabSystem *sys, double x, double y, double *out);

// Full analysis as canonical JSON. `n_scan` of 0 selects the default scan.
//
// # Safety
// `sys` must be a live handle and `out` a valid pointer.
enum CclabStatus cclab_analyze_json(const struct CclabSystem *sys,
                                    double r_min,
                                    double r_max,
                                    size_t n_scan,
                                    char **out);

// Minimal `k` for which the exact sum exceeds the claimed Hilbert-number value.
//
// # Safety
// `out` must be a valid pointer.
enum CclabStatus cclab_hilbert_threshold(uint32_t *out);

// Runs the catalogue regression; writes canonical JSON and whether every check passed.
//
// # Safety
// `out` and `all_pass` must be valid pointers.
enum CclabStatus cclab_paper_check_json(char **out, bool *all_pass);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string obtained from this library that has not been freed.
void cclab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CCLAB_H */
