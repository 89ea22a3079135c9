"""superloop - exact modules over loop superalgebras - Source package"""

__version__ = "0.1.0"
