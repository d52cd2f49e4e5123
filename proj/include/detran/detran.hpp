#pragma once

#include "detran/align.hpp"
#include "detran/classifier.hpp"
#include "detran/common.hpp"
#include "detran/corpus.hpp"
#include "detran/embedding.hpp"
#include "detran/eval.hpp"
#include "detran/inlp.hpp"
#include "detran/labeled.hpp"
#include "detran/rng.hpp"
#include "detran/sgns.hpp"
#include "detran/tagging.hpp"
#include "detran/usage_change.hpp"
