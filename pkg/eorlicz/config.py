# -*- coding: utf-8 -*-
# config.py - Constantes de configuração e rotina de logging do pacote eorlicz
# Os valores padrão podem ser sobrescritos pelo arquivo de especificação (JSON)
# ou, no caso do logging, por variáveis de ambiente.

import os
import sys
import logging
from typing import Optional

# =================================================================
# 1. CONFIGURAÇÕES DE AMOSTRAGEM (CheckConfig)
# =================================================================

# Grade geométrica de u: 10^-8 ... 10^8 com 65 pontos
U_GRID_MIN_EXP = -8
U_GRID_MAX_EXP = 8
U_GRID_POINTS = 65

LADDER_RATIO = 2.0
MAX_LADDER = 60
LADDER_U0 = 1.0

TOL_CONVEX = 1e-9
TOL_ZERO_LIMIT = 1e-4
BIG_M = 1e6

# Pares aleatórios do teste do ponto médio
RANDOM_PAIRS = 200
DEFAULT_SEED = 0

# Valores acima deste limite são tratados como +inf (estouro de ponto flutuante)
OVERFLOW_GUARD = 1e300
# Fronteira finito/infinito com Psi acima deste valor é artefato do guard, não limiar U_Phi
OVERFLOW_ARTIFACT = 1e290

# Espalhamento relativo máximo nos últimos degraus da escada (critério de Cauchy)
CAUCHY_SPREAD = 1e-6
CAUCHY_TAIL = 10

# Bisseção de limiares (U_Phi, a_Phi)
THRESHOLD_TOL = 1e-9
THRESHOLD_MAX_ITER = 200

# =================================================================
# 2. CONFIGURAÇÕES DA NORMA DE LUXEMBURG
# =================================================================

NORM_TOL = 1e-10
NORM_MAX_ITER = 200
NORM_LAMBDA_MAX = 1e12
MONOTONE_MAX_NODES = 32

# =================================================================
# 3. LOGGING
# =================================================================

LOG_LEVEL = os.getenv("EORLICZ_LOG_LEVEL", "INFO")
LOG_FILE = os.getenv("EORLICZ_LOG_FILE", "")
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

logger = logging.getLogger("eorlicz")


def setup_logging(log_file: Optional[str] = None, level: Optional[str] = None) -> logging.Logger:
    """
    Configura o logger do pacote: console (stderr, o stdout fica reservado aos
    relatórios JSON) e, opcionalmente, um arquivo de log.
    """
    # Limpa handlers existentes para reconfigurar (evita duplicação)
    while logger.handlers:
        logger.handlers.pop()

    logger.setLevel((level or LOG_LEVEL).upper())
    formatter = logging.Formatter(LOG_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_file = log_file or LOG_FILE
    if log_file:
        file_handler = logging.FileHandler(log_file, mode='a', encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)
        logger.debug(f"Log em arquivo: {log_file}")

    return logger
