#pragma once

#include "brute_force.hpp"
#include "closure.hpp"
#include "formula.hpp"
#include "fuzz.hpp"
#include "json_output.hpp"
#include "parser.hpp"
#include "proof.hpp"
#include "proof_io.hpp"
#include "semantics.hpp"
#include "tableau.hpp"
#include "trace.hpp"
#include "trace_io.hpp"
