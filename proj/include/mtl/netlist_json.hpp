#pragma once

#include <string>

#include "mtl/netlist.hpp"

namespace mtl {

/// Serializes to the interchange schema: {"name", "inputs", "outputs",
/// "cells": [{id, kind, fan_in, v_ref, has_opamp, inputs, output}]} with kind
/// in {"nor","nand","inv"} and the constant nets spelled "$low"/"$high".
/// Output is stable: re-exporting a loaded netlist reproduces it byte for
/// byte.
std::string netlist_to_json(const netlist& nl);

/// Parses and validates (schema first, then graph rules). Cells get equal
/// default memristances; block metadata does not survive the round trip.
netlist netlist_from_json(const std::string& text);

/// Graphviz view: primary inputs, instances and primary outputs as nodes,
/// net connectivity as edges.
std::string netlist_to_dot(const netlist& nl);

} // namespace mtl
