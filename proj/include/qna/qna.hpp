#pragma once

#include "qna/gates.hpp"
#include "qna/linalg.hpp"
#include "qna/market.hpp"
#include "qna/network.hpp"
#include "qna/probability_map.hpp"
#include "qna/random.hpp"
#include "qna/statistics.hpp"
