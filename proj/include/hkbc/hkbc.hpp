#pragma once

#include "errors.hpp"
#include "random.hpp"
#include "label.hpp"
#include "utf8.hpp"
#include "corpus.hpp"
#include "preprocess.hpp"
#include "features.hpp"
#include "mnb.hpp"
#include "linear.hpp"
#include "forest.hpp"
#include "ensemble.hpp"
#include "neuralnet.hpp"
#include "eval.hpp"
#include "pipeline.hpp"
#include "model_io.hpp"
#include "report.hpp"
#include "cli.hpp"
