#pragma once

#include "compute.hpp"
#include "config.hpp"
#include "consensus.hpp"
#include "engine.hpp"
#include "eval.hpp"
#include "ingest.hpp"
#include "store.hpp"
#include "synthetic.hpp"
#include "types.hpp"
