import logging

logger = logging.getLogger('UnorderedRules')

def log(message, summary='', level=logging.INFO):
    if summary:
        logger.log(level, '%s: %s', summary, message)
    else:
        logger.log(level, '%s', message)

def debug(message, summary=''):
    if logger.isEnabledFor(logging.DEBUG):
        log(message, summary, level=logging.DEBUG)
