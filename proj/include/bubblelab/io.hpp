#pragma once

// Binary grid-field format and report writers.
//
// Field file layout (little-endian):
//   magic   "AXIF"            4 bytes
//   version u32               = 1
//   N       u32
//   flags   u32               bit 0: periodic in y1
//   n1, nr  u64, u64
//   period  f64               0 when not periodic
//   y1[n1]  f64 node coordinates
//   r[nr]   f64 node coordinates
//   v[n1*nr] f64 values, row-major (y1 outer, r inner)
// A JSON sidecar (<path>.json) carries the ansatz parameters.

#include <string>

#include "bubblelab/field.hpp"
#include "bubblelab/types.hpp"

namespace bubblelab {

void write_field(const std::string& path, const Field& f, int N);
Field read_field(const std::string& path, int* N_out = nullptr);

std::string ansatz_to_json(const Ansatz& a);
Ansatz ansatz_from_json(const std::string& text);

void write_field_with_sidecar(const std::string& path, const Field& f, const Ansatz& a);
Field read_field_with_sidecar(const std::string& path, Ansatz* a_out);

// Deterministic float formatting shared by every CSV/JSON writer.
std::string format_double(double x);

}  // namespace bubblelab
