#pragma once

#include "rvlitmus/litmus.hpp"
#include "rvlitmus/parser.hpp"
#include "rvlitmus/validate.hpp"
#include "rvlitmus/relation.hpp"
#include "rvlitmus/semantics.hpp"
#include "rvlitmus/model.hpp"
#include "rvlitmus/enumerator.hpp"
#include "rvlitmus/sc_oracle.hpp"
#include "rvlitmus/report.hpp"
