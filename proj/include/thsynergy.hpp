#pragma once

#include "thsynergy/correlation.hpp"
#include "thsynergy/decomposition.hpp"
#include "thsynergy/entropy.hpp"
#include "thsynergy/ingestion.hpp"
#include "thsynergy/pipeline.hpp"
#include "thsynergy/report.hpp"
#include "thsynergy/synthgen.hpp"
#include "thsynergy/taxonomy.hpp"
